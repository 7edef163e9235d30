use num_rational::Ratio;
use serde::Serialize;

use crate::error::{domain, Result};

/// Interleaved partition of `{1, …, n}` into `k` blocks
/// `I_i = {i, i+k, i+2k, …}` for `i = 1, …, k`.
///
/// With `n = lk + r`, `0 ≤ r < k`, blocks `1..=r` hold `l + 1` indices and
/// the remaining `k - r` blocks hold `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockingScheme {
    pub n: u64,
    pub k: u64,
    pub l: u64,
    pub r: u64,
    /// 1-based indices of each block, in increasing order.
    pub blocks: Vec<Vec<u64>>,
}

pub fn blocking(n: u64, k: u64) -> Result<BlockingScheme> {
    if k < 1 || k > n {
        return domain(format!("need 1 <= k <= n, got k = {k}, n = {n}"));
    }
    let (l, r) = (n / k, n % k);
    let blocks = (1..=k)
        .map(|i| {
            let len = if i <= r { l + 1 } else { l };
            (0..len).map(|j| i + j * k).collect()
        })
        .collect();
    Ok(BlockingScheme { n, k, l, r, blocks })
}

impl BlockingScheme {
    /// Mixing weights `|I_i| / n`; they sum to exactly one.
    pub fn block_weights(&self) -> Vec<Ratio<u64>> {
        self.blocks
            .iter()
            .map(|b| Ratio::new(b.len() as u64, self.n))
            .collect()
    }

    /// Block averages `g_i = |I_i|^{-1} Σ_{j ∈ I_i} h_j` of a length-`n`
    /// sequence `h_1, …, h_n`, so that `Σ_i (|I_i|/n) g_i` is the overall mean.
    pub fn block_means(&self, h: &[f64]) -> Result<Vec<f64>> {
        if h.len() as u64 != self.n {
            return domain(format!("expected {} values, got {}", self.n, h.len()));
        }
        Ok(self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&j| h[(j - 1) as usize]).sum::<f64>() / b.len() as f64)
            .collect())
    }
}
