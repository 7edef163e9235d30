//! Seeding conventions and deterministic parallel reductions for Monte Carlo.
//!
//! Every random quantity is drawn from a ChaCha8 generator keyed by a `u64`
//! seed and a stream id. Replica `i` of a run with seed `s` uses seed `s + i`.
//! Work is split into fixed chunks whose results are combined in chunk order,
//! so outputs do not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Stream ids that keep the random sources of one run independent.
pub mod stream {
    pub const TRAJECTORY: u64 = 0;
    pub const NOISE: u64 = 1;
    pub const PILOT: u64 = 2;
    pub const RISK: u64 = 3;
    pub const TEST_SET: u64 = 4;
    pub const SURROGATE: u64 = 5;
}

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn replica_seed(seed: u64, replica: u64) -> u64 {
    seed.wrapping_add(replica)
}

/// Runs `f(chunk_index, range)` over `total` items split into chunks of
/// `chunk` items and returns the per-chunk results in chunk order.
pub fn chunked<T, F>(total: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, std::ops::Range<usize>) -> T + Sync,
{
    let chunk = chunk.max(1);
    let n_chunks = total.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            f(c, start..(start + chunk).min(total))
        })
        .collect()
}

/// Running first and second moments.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(mut self, other: Moments) -> Moments {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Standard error of the mean under independent draws.
    pub fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            mean: self.mean(),
            se: self.standard_error(),
        }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}
