use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::systems::{uniform53, SystemKind, TWO_POW_NEG_53};
use crate::error::{domain, Result};
use crate::mc::{self, stream};

/// A finite sample path `Z_0, …, Z_{n-1}` of a dynamical system.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<f64>,
    dim: usize,
    system: SystemKind,
    seed: u64,
    burn_in: usize,
}

impl Trajectory {
    /// Wraps externally produced states (flat, row-major).
    pub fn from_states(system: SystemKind, states: Vec<f64>, seed: u64) -> Result<Self> {
        let dim = system.dim();
        if states.is_empty() || states.len() % dim != 0 {
            return domain("state buffer length must be a positive multiple of the dimension");
        }
        Ok(Self {
            states,
            dim,
            system,
            seed,
            burn_in: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.states.chunks_exact(self.dim)
    }

    /// Flat row-major state buffer.
    pub fn as_flat(&self) -> &[f64] {
        &self.states
    }

    pub fn coordinate(&self, j: usize) -> Vec<f64> {
        self.iter().map(|s| s[j]).collect()
    }

    pub fn system(&self) -> &SystemKind {
        &self.system
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in
    }
}

/// Uniform `[-E, E]^d` noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub half_width: f64,
    pub dim: usize,
}

impl NoiseModel {
    pub fn uniform_box(half_width: f64, dim: usize) -> Result<Self> {
        let n = Self { half_width, dim };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return domain(format!(
                "noise half-width {} must be positive",
                self.half_width
            ));
        }
        if self.dim == 0 {
            return domain("noise dimension must be positive");
        }
        Ok(())
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = self.half_width * (2.0 * rng.random::<f64>() - 1.0);
        }
    }
}

/// Shift register over an i.i.d. fair bit stream.
///
/// The window holds bits `b_{k+1} … b_{k+64}`; its top 53 bits read as a
/// binary fraction are the doubling-map state `X_k`, exact in distribution.
struct BitShift {
    rng: ChaCha8Rng,
    buf: u64,
    left: u32,
    window: u64,
    last_out: bool,
}

impl BitShift {
    fn new(mut rng: ChaCha8Rng) -> Self {
        let window = rng.random::<u64>();
        Self {
            rng,
            buf: 0,
            left: 0,
            window,
            last_out: false,
        }
    }

    fn next_bit(&mut self) -> u64 {
        if self.left == 0 {
            self.buf = self.rng.random();
            self.left = 64;
        }
        let b = self.buf & 1;
        self.buf >>= 1;
        self.left -= 1;
        b
    }

    fn shift(&mut self) {
        self.last_out = self.window >> 63 == 1;
        self.window = (self.window << 1) | self.next_bit();
    }

    fn doubling_state(&self) -> f64 {
        (self.window >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Tent-map state: the binary digits of `T^k x` are `b_{k+j} xor b_k`.
    fn tent_state(&self) -> f64 {
        let m = self.window >> 11;
        let m = if self.last_out {
            ((1u64 << 53) - 1) - m
        } else {
            m
        };
        m as f64 * TWO_POW_NEG_53
    }
}

/// A length-`n` stationary path started from the invariant measure.
///
/// Doubling and tent paths come from a fresh i.i.d. bit stream and the
/// logistic path from the conjugacy `x = sin²(πθ)` with `θ` a doubling path,
/// so none of them collapses under binary floating point. The cat map runs
/// exactly on the `2^-64` lattice, where it is a bijection preserving the
/// uniform distribution. Piecewise expanding maps are iterated in floating
/// point after `burn_in` steps from a uniform start.
pub fn generate_trajectory(
    system: &SystemKind,
    n: usize,
    seed: u64,
    burn_in: usize,
) -> Result<Trajectory> {
    system.validate()?;
    if n < 1 {
        return domain("trajectory length must be at least 1");
    }
    let rng = mc::rng(seed, stream::TRAJECTORY);
    let dim = system.dim();
    let mut states = Vec::with_capacity(n * dim);
    match system {
        SystemKind::DoublingMap | SystemKind::TentMap | SystemKind::LogisticA4 => {
            let mut bits = BitShift::new(rng);
            for _ in 0..burn_in {
                bits.shift();
            }
            for i in 0..n {
                if i > 0 {
                    bits.shift();
                }
                let x = match system {
                    SystemKind::DoublingMap => bits.doubling_state(),
                    SystemKind::TentMap => bits.tent_state(),
                    _ => {
                        let s = (PI * bits.doubling_state()).sin();
                        s * s
                    }
                };
                states.push(x);
            }
        }
        SystemKind::CatMap2D => {
            let mut rng = rng;
            let (mut x, mut y) = (rng.random::<u64>(), rng.random::<u64>());
            let step = |x: &mut u64, y: &mut u64| {
                let nx = x.wrapping_add(*y);
                let ny = x.wrapping_add(y.wrapping_mul(2));
                *x = nx;
                *y = ny;
            };
            for _ in 0..burn_in {
                step(&mut x, &mut y);
            }
            for i in 0..n {
                if i > 0 {
                    step(&mut x, &mut y);
                }
                states.push((x >> 11) as f64 * TWO_POW_NEG_53);
                states.push((y >> 11) as f64 * TWO_POW_NEG_53);
            }
        }
        SystemKind::PiecewiseExpanding { .. } => {
            let mut rng = rng;
            let mut s = vec![uniform53(&mut rng)];
            for _ in 0..burn_in {
                system.step(&mut s);
            }
            for i in 0..n {
                if i > 0 {
                    system.step(&mut s);
                }
                states.push(s[0]);
            }
        }
    }
    Ok(Trajectory {
        states,
        dim,
        system: system.clone(),
        seed,
        burn_in,
    })
}

/// `n` independent draws from the invariant measure, laid out like a path.
/// Serves as the i.i.d. surrogate that breaks all temporal dependence.
pub fn generate_iid_surrogate(system: &SystemKind, n: usize, seed: u64) -> Result<Trajectory> {
    system.validate()?;
    if n < 1 {
        return domain("surrogate length must be at least 1");
    }
    let mut rng = mc::rng(seed, stream::SURROGATE);
    let mut states = Vec::with_capacity(n * system.dim());
    for _ in 0..n {
        states.extend(system.sample_stationary(&mut rng));
    }
    Trajectory::from_states(system.clone(), states, seed)
}

/// Adds i.i.d. uniform noise drawn from a stream independent of the path.
pub fn add_noise(t: &Trajectory, noise: &NoiseModel, seed: u64) -> Result<Vec<Vec<f64>>> {
    noise.validate()?;
    if noise.dim != t.dim() {
        return domain(format!(
            "noise dimension {} does not match trajectory dimension {}",
            noise.dim,
            t.dim()
        ));
    }
    let mut rng = mc::rng(seed, stream::NOISE);
    let mut eps = vec![0.0; noise.dim];
    Ok(t.iter()
        .map(|s| {
            noise.draw(&mut rng, &mut eps);
            s.iter().zip(&eps).map(|(a, e)| a + e).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_path_does_not_collapse() {
        let t = generate_trajectory(&SystemKind::DoublingMap, 200, 3, 0).unwrap();
        assert!(t.iter().skip(60).all(|s| s[0] != 0.0));
        // naive float iteration from the same start collapses well before 200 steps
        let mut x = t.state(0)[0];
        let mut collapsed_at = None;
        for k in 1..200 {
            x = (2.0 * x) % 1.0;
            if x == 0.0 {
                collapsed_at = Some(k);
                break;
            }
        }
        assert!(collapsed_at.unwrap() <= 60);
    }

    #[test]
    fn paths_follow_the_map_up_to_rounding() {
        for sys in [
            SystemKind::DoublingMap,
            SystemKind::TentMap,
            SystemKind::LogisticA4,
        ] {
            let t = generate_trajectory(&sys, 500, 9, 17).unwrap();
            for k in 0..t.len() - 1 {
                let next = sys.iterate(t.state(k)).unwrap()[0];
                let tol = if sys == SystemKind::LogisticA4 {
                    1e-12
                } else {
                    4.0 * f64::EPSILON
                };
                // the logistic map amplifies rounding by up to 4 per step; compare one step only
                assert!((next - t.state(k + 1)[0]).abs() <= tol, "{sys:?} step {k}");
            }
        }
        let t = generate_trajectory(&SystemKind::CatMap2D, 100, 2, 5).unwrap();
        for k in 0..t.len() - 1 {
            let next = SystemKind::CatMap2D.iterate(t.state(k)).unwrap();
            for j in 0..2 {
                let d = (next[j] - t.state(k + 1)[j]).abs();
                assert!(d < 1e-14 || (1.0 - d) < 1e-14, "step {k}: {d}");
            }
        }
    }

    #[test]
    fn determinism() {
        for sys in [
            SystemKind::DoublingMap,
            SystemKind::LogisticA4,
            SystemKind::TentMap,
            SystemKind::CatMap2D,
            SystemKind::PiecewiseExpanding {
                slopes: vec![2.5, -3.0],
                breakpoints: vec![0.0, 0.4, 1.0],
            },
        ] {
            let a = generate_trajectory(&sys, 300, 42, 10).unwrap();
            let b = generate_trajectory(&sys, 300, 42, 10).unwrap();
            assert_eq!(a, b);
            let c = generate_trajectory(&sys, 300, 43, 10).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn ranges() {
        let t = generate_trajectory(&SystemKind::CatMap2D, 1000, 1, 0).unwrap();
        assert!(t.as_flat().iter().all(|v| (0.0..1.0).contains(v)));
        for sys in [
            SystemKind::DoublingMap,
            SystemKind::LogisticA4,
            SystemKind::TentMap,
        ] {
            let t = generate_trajectory(&sys, 1000, 1, 0).unwrap();
            assert!(t.as_flat().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn zero_length_is_rejected() {
        assert!(generate_trajectory(&SystemKind::DoublingMap, 0, 1, 0).is_err());
    }

    #[test]
    fn logistic_mean_is_one_half() {
        let t = generate_trajectory(&SystemKind::LogisticA4, 100_000, 5, 0).unwrap();
        let mean = t.as_flat().iter().sum::<f64>() / t.len() as f64;
        assert!((mean - 0.5).abs() < 0.01, "{mean}");
    }

    #[test]
    fn tiny_noise_barely_moves_states() {
        let t = generate_trajectory(&SystemKind::DoublingMap, 100, 1, 0).unwrap();
        let noisy = add_noise(&t, &NoiseModel::uniform_box(1e-12, 1).unwrap(), 2).unwrap();
        for (s, o) in t.iter().zip(&noisy) {
            assert!((s[0] - o[0]).abs() <= 1e-12);
        }
    }

    #[test]
    fn noise_is_centered_and_independent_of_states() {
        let n = 100_000;
        let t = generate_trajectory(&SystemKind::DoublingMap, n, 1, 0).unwrap();
        let noisy = add_noise(&t, &NoiseModel::uniform_box(0.1, 1).unwrap(), 1).unwrap();
        let eps: Vec<f64> = t.iter().zip(&noisy).map(|(s, o)| o[0] - s[0]).collect();
        let mean_eps = eps.iter().sum::<f64>() / n as f64;
        assert!(mean_eps.abs() < 0.002, "{mean_eps}");
        let xs = t.coordinate(0);
        let mx = xs.iter().sum::<f64>() / n as f64;
        let cov: f64 = xs
            .iter()
            .zip(&eps)
            .map(|(x, e)| (x - mx) * (e - mean_eps))
            .sum::<f64>()
            / n as f64;
        let sx = (xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>() / n as f64).sqrt();
        let se = (eps.iter().map(|e| (e - mean_eps).powi(2)).sum::<f64>() / n as f64).sqrt();
        let corr = cov / (sx * se);
        assert!(corr.abs() < 0.01, "{corr}");
    }

    #[test]
    fn noise_dimension_mismatch() {
        let t = generate_trajectory(&SystemKind::CatMap2D, 10, 1, 0).unwrap();
        assert!(add_noise(&t, &NoiseModel::uniform_box(0.1, 1).unwrap(), 1).is_err());
        assert!(NoiseModel::uniform_box(0.0, 1).is_err());
    }

    #[test]
    fn iid_surrogate_shape() {
        let t = generate_iid_surrogate(&SystemKind::CatMap2D, 50, 4).unwrap();
        assert_eq!(t.len(), 50);
        assert_eq!(t.dim(), 2);
    }
}
