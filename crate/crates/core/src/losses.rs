//! Least-squares and pinball losses, clipping, and empirical risks.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LossKind {
    LeastSquares,
    Pinball { tau: f64 },
}

impl LossKind {
    pub fn validate(&self) -> Result<()> {
        if let LossKind::Pinball { tau } = self {
            if !(*tau > 0.0 && *tau < 1.0) {
                return domain(format!("pinball level tau = {tau} must lie in (0, 1)"));
            }
        }
        Ok(())
    }

    /// The unscaled loss of residual `r = y − t`.
    pub fn raw(&self, r: f64) -> f64 {
        match *self {
            LossKind::LeastSquares => r * r,
            LossKind::Pinball { tau } => {
                if r < 0.0 {
                    -(1.0 - tau) * r
                } else {
                    tau * r
                }
            }
        }
    }

    /// Scale that makes the loss at most 1 when `|y|, |t| ≤ m`.
    pub fn default_scale(&self, m: f64) -> f64 {
        match self {
            LossKind::LeastSquares => 1.0 / (4.0 * m * m),
            LossKind::Pinball { .. } => 1.0 / (2.0 * m),
        }
    }
}

/// A loss together with the clipping level `M` and an output scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossSpec {
    pub kind: LossKind,
    pub clip_level: f64,
    pub scale: f64,
}

impl LossSpec {
    pub fn new(kind: LossKind, clip_level: f64, scale: f64) -> Result<Self> {
        let s = Self {
            kind,
            clip_level,
            scale,
        };
        s.validate()?;
        Ok(s)
    }

    /// Uses [`LossKind::default_scale`].
    pub fn normalized(kind: LossKind, clip_level: f64) -> Result<Self> {
        Self::new(kind, clip_level, kind.default_scale(clip_level))
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()?;
        if !(self.clip_level > 0.0 && self.clip_level.is_finite()) {
            return domain(format!(
                "clip level M = {} must be positive",
                self.clip_level
            ));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return domain(format!("loss scale {} must be positive", self.scale));
        }
        Ok(())
    }

    pub fn loss(&self, y: f64, t: f64) -> f64 {
        self.scale * self.kind.raw(y - t)
    }

    pub fn raw_loss(&self, y: f64, t: f64) -> f64 {
        self.kind.raw(y - t)
    }

    /// Lipschitz constant of `t ↦ loss(y, t)` on `[−M, M]` for `|y| ≤ M`.
    pub fn lipschitz_factor(&self) -> f64 {
        match self.kind {
            LossKind::LeastSquares => self.scale * 4.0 * self.clip_level,
            LossKind::Pinball { tau } => self.scale * tau.max(1.0 - tau),
        }
    }
}

pub fn clip(t: f64, m: f64) -> f64 {
    t.clamp(-m, m)
}

/// Whether clipping the prediction never increases the loss on `(y, t)`
/// samples.
pub fn clipping_reduces_loss_check(spec: &LossSpec, samples: &[(f64, f64)]) -> bool {
    samples
        .iter()
        .all(|&(y, t)| spec.loss(y, clip(t, spec.clip_level)) <= spec.loss(y, t))
}

/// `(1/n) Σ L(y_i, f(x_i))`.
pub fn empirical_risk(spec: &LossSpec, data: &Dataset, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
    if data.is_empty() {
        return domain("empirical risk of an empty sample");
    }
    let total: f64 = data
        .inputs()
        .iter()
        .zip(data.targets())
        .map(|(x, &y)| spec.loss(y, f(x)))
        .sum();
    Ok(total / data.len() as f64)
}

/// Upper bound on the Lipschitz constant of `(x, y) ↦ L(y, f(x))` for
/// `|y| ≤ M`, unscaled loss, given `‖f‖_∞` and the Lipschitz constant of `f`.
pub fn lipschitz_constant(kind: LossKind, m: f64, f_sup: f64, f_lip: f64) -> Result<f64> {
    kind.validate()?;
    if !(f_sup >= 0.0 && f_lip >= 0.0) {
        return domain("sup norm and Lipschitz constant of f must be >= 0");
    }
    Ok(match kind {
        LossKind::LeastSquares => {
            if !(m > 0.0) {
                return domain("M must be positive");
            }
            2.0 * SQRT_2 * (m + f_sup) * (1.0 + f_lip)
        }
        LossKind::Pinball { .. } => SQRT_2 * (1.0 + f_lip),
    })
}
