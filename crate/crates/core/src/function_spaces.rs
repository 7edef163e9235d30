//! Semi-norms and the C-norm of functions represented by samples.
//!
//! All semi-norms are evaluated over the given grid only, so they are lower
//! bounds of the analytic quantities. For a one-dimensional function read as
//! its piecewise-linear interpolant (see [`SampledFunction::eval_1d`]) the grid
//! values of the sup-norm, total variation and Lipschitz constant are exact.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Relative slack used when comparing the two sides of the exp-property.
pub const EXP_PROPERTY_SLACK: f64 = 1e-12;

/// A real function known through its values on a finite set of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
    holder_exponent: f64,
}

/// Which semi-norm completes the sup-norm to a C-norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeminormKind {
    /// The zero semi-norm; the C-norm reduces to the sup-norm.
    Null,
    /// Discrete total variation (one-dimensional, sorted points).
    BoundedVariation,
    /// Hölder semi-norm with the function's own exponent.
    Holder,
    /// Hölder semi-norm with exponent 1.
    #[default]
    Lipschitz,
    /// Sup of |f'|, realised as the Lipschitz constant over the grid.
    C1,
}

/// Sup-norm, semi-norm and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CNorm {
    pub sup_norm: f64,
    pub semi_norm: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpPropertyReport {
    /// Semi-norm of exp(f).
    pub lhs: f64,
    /// Sup-norm of exp(f) times the semi-norm of f.
    pub rhs: f64,
    pub holds: bool,
}

impl SampledFunction {
    pub fn new(points: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return domain("sampled function needs at least one point");
        }
        if points.len() != values.len() {
            return domain(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            ));
        }
        let dim = points[0].len();
        if dim == 0 {
            return domain("points must have dimension at least 1");
        }
        if points.iter().any(|p| p.len() != dim) {
            return domain("all points must share one dimension");
        }
        if points
            .iter()
            .flatten()
            .chain(values.iter())
            .any(|v| !v.is_finite())
        {
            return domain("points and values must be finite");
        }
        Ok(Self {
            points,
            values,
            holder_exponent: 1.0,
        })
    }

    /// One-dimensional function from abscissae and values.
    pub fn from_1d(xs: &[f64], values: Vec<f64>) -> Result<Self> {
        Self::new(xs.iter().map(|&x| vec![x]).collect(), values)
    }

    /// Samples `f` on `n` equally spaced points of `[lo, hi]`.
    pub fn from_fn_1d(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return domain("grid needs n >= 2 and hi > lo");
        }
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let values = xs.iter().map(|&x| f(x)).collect();
        Self::from_1d(&xs, values)
    }

    pub fn with_holder_exponent(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return domain(format!("Hölder exponent {alpha} not in (0, 1]"));
        }
        self.holder_exponent = alpha;
        Ok(self)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn holder_exponent(&self) -> f64 {
        self.holder_exponent
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid, values passed through `g`.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        let values = self.values.iter().map(|&v| g(v)).collect();
        Ok(Self::new(self.points.clone(), values)?.with_holder_exponent(self.holder_exponent)?)
    }

    /// True for one-dimensional functions on strictly increasing abscissae.
    pub fn is_sorted_1d(&self) -> bool {
        self.dim() == 1 && self.points.windows(2).all(|w| w[0][0] < w[1][0])
    }

    /// Piecewise-linear interpolant, extended by constants outside the grid.
    ///
    /// Requires [`Self::is_sorted_1d`]; callers validate once up front.
    pub fn eval_1d(&self, x: f64) -> f64 {
        debug_assert!(self.is_sorted_1d() || self.len() == 1);
        let n = self.len();
        if n == 1 || x <= self.points[0][0] {
            return self.values[0];
        }
        if x >= self.points[n - 1][0] {
            return self.values[n - 1];
        }
        // first index with abscissa > x
        let hi = self.points.partition_point(|p| p[0] <= x);
        let (x0, x1) = (self.points[hi - 1][0], self.points[hi][0]);
        let (v0, v1) = (self.values[hi - 1], self.values[hi]);
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }

    fn require_sorted_1d(&self) -> Result<()> {
        if self.dim() != 1 {
            return domain("bounded variation needs a one-dimensional function");
        }
        if !self.is_sorted_1d() {
            return domain("bounded variation needs strictly increasing points");
        }
        Ok(())
    }
}

/// Largest absolute sampled value.
pub fn sup_norm(f: &SampledFunction) -> f64 {
    f.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Discrete total variation over the given partition.
pub fn bv_seminorm(f: &SampledFunction) -> Result<f64> {
    f.require_sorted_1d()?;
    Ok(f.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum())
}

/// Hölder semi-norm with the function's exponent, maximised over all pairs.
pub fn holder_seminorm(f: &SampledFunction) -> Result<f64> {
    holder_with_exponent(f, f.holder_exponent)
}

fn holder_with_exponent(f: &SampledFunction, alpha: f64) -> Result<f64> {
    let mut best = 0.0_f64;
    let mut distinct_pair = false;
    for i in 0..f.len() {
        for j in (i + 1)..f.len() {
            let dist = euclidean(&f.points[i], &f.points[j]);
            let dv = (f.values[i] - f.values[j]).abs();
            if dist == 0.0 {
                if dv != 0.0 {
                    return domain("conflicting values at a repeated point");
                }
                continue;
            }
            distinct_pair = true;
            let q = if alpha == 1.0 {
                dv / dist
            } else {
                dv / dist.powf(alpha)
            };
            best = best.max(q);
        }
    }
    if !distinct_pair {
        return domain("Hölder semi-norm needs at least two distinct points");
    }
    Ok(best)
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn seminorm(f: &SampledFunction, kind: SeminormKind) -> Result<f64> {
    match kind {
        SeminormKind::Null => Ok(0.0),
        SeminormKind::BoundedVariation => bv_seminorm(f),
        SeminormKind::Holder => holder_seminorm(f),
        SeminormKind::Lipschitz | SeminormKind::C1 => holder_with_exponent(f, 1.0),
    }
}

pub fn c_norm(f: &SampledFunction, kind: SeminormKind) -> Result<CNorm> {
    let sup = sup_norm(f);
    let semi = seminorm(f, kind)?;
    Ok(CNorm {
        sup_norm: sup,
        semi_norm: semi,
        total: sup + semi,
    })
}

/// Evaluates both sides of `‖e^f‖ ≤ ‖e^f‖_∞ ‖f‖` on the grid.
pub fn check_exp_property(f: &SampledFunction, kind: SeminormKind) -> Result<ExpPropertyReport> {
    let exp_f = f.map(f64::exp)?;
    let lhs = seminorm(&exp_f, kind)?;
    let rhs = sup_norm(&exp_f) * seminorm(f, kind)?;
    Ok(ExpPropertyReport {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + EXP_PROPERTY_SLACK),
    })
}
