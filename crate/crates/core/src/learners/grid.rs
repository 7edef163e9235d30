use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub const DEFAULT_GRID_CAP: usize = 32;

/// Candidate regularization levels and kernel widths, both ascending in
/// `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperGrid {
    pub lambdas: Vec<f64>,
    pub sigmas: Vec<f64>,
    /// Largest gap between consecutive values of `{0} ∪ lambdas`.
    pub lambda_spacing: f64,
    pub sigma_spacing: f64,
    /// False if either axis was subsampled to respect the cap.
    pub exact: bool,
}

impl HyperGrid {
    /// A grid from explicit lists; values are sorted and deduplicated.
    pub fn from_values(mut lambdas: Vec<f64>, mut sigmas: Vec<f64>) -> Result<Self> {
        for v in lambdas.iter().chain(&sigmas) {
            if !(*v > 0.0 && *v <= 1.0) {
                return domain(format!("grid value {v} outside (0, 1]"));
            }
        }
        if lambdas.is_empty() || sigmas.is_empty() {
            return domain("grid axes must be nonempty");
        }
        lambdas.sort_by(f64::total_cmp);
        lambdas.dedup();
        sigmas.sort_by(f64::total_cmp);
        sigmas.dedup();
        Ok(Self {
            lambda_spacing: spacing(&lambdas),
            sigma_spacing: spacing(&sigmas),
            lambdas,
            sigmas,
            exact: false,
        })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len() * self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn spacing(sorted: &[f64]) -> f64 {
    let mut prev = 0.0;
    let mut gap: f64 = 0.0;
    for &v in sorted {
        gap = gap.max(v - prev);
        prev = v;
    }
    gap
}

/// Keeps at most `cap` values, picked nearest to a geometric sequence
/// between the smallest and largest value.
fn subsample(values: Vec<f64>, cap: usize) -> Vec<f64> {
    if values.len() <= cap {
        return values;
    }
    let (lo, hi) = (values[0], values[values.len() - 1]);
    if cap == 1 {
        return vec![hi];
    }
    let mut out: Vec<f64> = (0..cap)
        .map(|i| {
            let target = lo * (hi / lo).powf(i as f64 / (cap - 1) as f64);
            let j = values.partition_point(|&v| v < target);
            match j {
                0 => values[0],
                j if j == values.len() => values[j - 1],
                j if target - values[j - 1] <= values[j] - target => values[j - 1],
                j => values[j],
            }
        })
        .collect();
    out.dedup();
    out
}

/// `λ ∈ {j/n}` and `σ ∈ {1 − jδ > 0}` with `δ = n^{−1/(2+d)}`, each
/// subsampled to at most `cap` values.
pub fn make_hypergrid(n: usize, d: usize, cap: usize) -> Result<HyperGrid> {
    if n < 4 {
        return domain(format!("n = {n} must be at least 4"));
    }
    if d < 1 {
        return domain("input dimension must be at least 1");
    }
    if cap < 1 {
        return domain("grid cap must be at least 1");
    }
    let lambdas: Vec<f64> = (1..=n).map(|j| j as f64 / n as f64).collect();
    let delta = (n as f64).powf(-1.0 / (2.0 + d as f64));
    let mut sigmas: Vec<f64> = (0..)
        .map(|j| 1.0 - j as f64 * delta)
        .take_while(|&s| s > 0.0)
        .collect();
    sigmas.reverse();
    let exact = lambdas.len() <= cap && sigmas.len() <= cap;
    let lambdas = subsample(lambdas, cap);
    let sigmas = subsample(sigmas, cap);
    Ok(HyperGrid {
        lambda_spacing: spacing(&lambdas),
        sigma_spacing: spacing(&sigmas),
        lambdas,
        sigmas,
        exact,
    })
}
