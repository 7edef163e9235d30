use serde::{Deserialize, Serialize};

use super::bounds::{bernstein_tail_bound, FunctionBounds};
use crate::error::{domain, Result};

/// Constants of the tail bounds compared against. A `None` leaves the
/// corresponding bound unevaluated; the variance proxies fall back to
/// `FunctionBounds::sigma2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComparatorParams {
    /// Mixing exponent γ of the process (also used for the α-mixing bound).
    pub gamma: f64,
    /// `C` in the Hoeffding-type bound `exp(−ε²n/C)`.
    pub hoeffding_c: Option<f64>,
    /// `c` in the α-mixing bound `(1 + 4e^{−2}c)·exp(−3ε²n^{(γ)}/(6σ² + 2εB))`.
    pub alpha_c: Option<f64>,
    /// `C` in the geometric α-mixing bound with `(log n)²` loss.
    pub alpha_geometric_c: Option<f64>,
    /// `v²` in the geometric α-mixing bound.
    pub v2: Option<f64>,
    /// `σ̃²` in the Markov-chain bound with `log n` loss.
    pub markov_sigma2: Option<f64>,
    /// `C1`, `C2` in the weakly dependent bound `exp(−ε²n/(C1 + C2 ε^{5/3} n^{2/3}))`.
    pub weak_c1: Option<f64>,
    pub weak_c2: Option<f64>,
}

impl Default for ComparatorParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            hoeffding_c: Some(1.0),
            alpha_c: Some(1.0),
            alpha_geometric_c: Some(1.0),
            v2: None,
            markov_sigma2: None,
            weak_c1: Some(1.0),
            weak_c2: Some(1.0),
        }
    }
}

/// One row of the comparison table; `value` is `None` when the bound's
/// constants were not supplied or its preconditions fail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparatorRow {
    pub name: &'static str,
    pub value: Option<f64>,
}

pub const COMPARATOR_NAMES: [&str; 6] = [
    "c_mixing_bernstein",
    "hoeffding",
    "alpha_mixing",
    "alpha_geometric",
    "markov_chain",
    "weak_dependence",
];

fn capped(prefactor: f64, exponent: f64) -> f64 {
    (prefactor * (-exponent).exp()).min(1.0)
}

/// Evaluates every bound on `P(|mean − E| ≥ ε)` at `(n, ε)`, in the order of
/// [`COMPARATOR_NAMES`].
pub fn comparator_bounds(
    n: u64,
    eps: f64,
    fb: &FunctionBounds,
    params: &ComparatorParams,
) -> Result<Vec<ComparatorRow>> {
    fb.validate()?;
    if n < 1 {
        return domain("n must be at least 1");
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return domain(format!("deviation {eps} must be finite and >= 0"));
    }
    if !(params.gamma > 0.0) {
        return domain("gamma must be positive");
    }
    let nf = n as f64;
    let e2 = eps * eps;
    let (b, sigma2) = (fb.b, fb.sigma2);
    // at eps = 0 every exponent vanishes; avoid 0/0 when sigma2 = 0
    let guard = |prefactor: f64, num: f64, den: f64| {
        if eps == 0.0 {
            prefactor.min(1.0)
        } else {
            capped(prefactor, num / den)
        }
    };
    let ours = if n >= 3 {
        Some(bernstein_tail_bound(n, eps, fb, params.gamma)?)
    } else {
        None
    };
    let hoeffding = params.hoeffding_c.map(|c| guard(1.0, e2 * nf, c));
    let alpha = params.alpha_c.map(|c| {
        let n_eff = nf.powf(params.gamma / (params.gamma + 1.0));
        guard(
            1.0 + 4.0 * (-2.0f64).exp() * c,
            3.0 * e2 * n_eff,
            6.0 * sigma2 + 2.0 * eps * b,
        )
    });
    let ln = nf.ln();
    let alpha_geo = params.alpha_geometric_c.map(|c| {
        let v2 = params.v2.unwrap_or(sigma2);
        guard(1.0, c * e2 * nf, v2 + eps * b * ln * ln + b * b / nf)
    });
    let markov = if n >= 2 {
        let s2 = params.markov_sigma2.unwrap_or(sigma2);
        Some(guard(1.0, nf * e2, s2 + eps * b * ln))
    } else {
        None
    };
    let weak = match (params.weak_c1, params.weak_c2) {
        (Some(c1), Some(c2)) => Some(guard(
            1.0,
            e2 * nf,
            c1 + c2 * eps.powf(5.0 / 3.0) * nf.powf(2.0 / 3.0),
        )),
        _ => None,
    };
    Ok(COMPARATOR_NAMES
        .iter()
        .zip([ours, hoeffding, alpha, alpha_geo, markov, weak])
        .map(|(&name, value)| ComparatorRow { name, value })
        .collect())
}
