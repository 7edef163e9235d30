use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Burn-in used when no closed-form invariant density is available.
pub const DEFAULT_BURN_IN: usize = 1000;

/// Scale turning the top 53 bits of a `u64` into a double in `[0, 1)`.
pub(crate) const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

/// A measure-preserving map on `[0,1]` or the 2-torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemKind {
    /// `x ↦ 2x mod 1`, Lebesgue-invariant.
    DoublingMap,
    /// `x ↦ 4x(1-x)`, invariant density `1/(π√(x(1-x)))`.
    LogisticA4,
    /// `x ↦ 1 - |1 - 2x|`, Lebesgue-invariant.
    TentMap,
    /// Arnold's cat map `(x, y) ↦ (x + y, x + 2y) mod 1`.
    #[serde(rename = "cat_map_2d")]
    CatMap2D,
    /// Branch `i` maps `[b_i, b_{i+1})` by `x ↦ s_i (x - b_i) mod 1`
    /// (for `s_i < 0`: `1 + s_i (x - b_i) mod 1`). `breakpoints` runs from 0 to 1.
    PiecewiseExpanding {
        slopes: Vec<f64>,
        breakpoints: Vec<f64>,
    },
}

impl SystemKind {
    pub fn validate(&self) -> Result<()> {
        if let SystemKind::PiecewiseExpanding {
            slopes,
            breakpoints,
        } = self
        {
            if slopes.is_empty() {
                return domain("piecewise expanding map needs at least one branch");
            }
            if slopes.iter().any(|s| !s.is_finite() || s.abs() <= 1.0) {
                return domain("every branch slope must have magnitude > 1");
            }
            if breakpoints.len() != slopes.len() + 1 {
                return domain("need one more breakpoint than slopes");
            }
            if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
                return domain("breakpoints must start at 0 and end at 1");
            }
            if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
                return domain("breakpoints must be strictly increasing");
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            SystemKind::CatMap2D => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::DoublingMap => "doubling_map",
            SystemKind::LogisticA4 => "logistic_a4",
            SystemKind::TentMap => "tent_map",
            SystemKind::CatMap2D => "cat_map_2d",
            SystemKind::PiecewiseExpanding { .. } => "piecewise_expanding",
        }
    }

    /// Burn-in needed before [`generate_trajectory`](super::generate_trajectory)
    /// output is stationary: zero where the start is drawn exactly.
    pub fn default_burn_in(&self) -> usize {
        match self {
            SystemKind::PiecewiseExpanding { .. } => DEFAULT_BURN_IN,
            _ => 0,
        }
    }

    /// One application of the map, after checking the state is in the domain.
    pub fn iterate(&self, state: &[f64]) -> Result<Vec<f64>> {
        self.validate()?;
        if state.len() != self.dim() {
            return domain(format!(
                "{} expects a state of dimension {}, got {}",
                self.name(),
                self.dim(),
                state.len()
            ));
        }
        if state.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return domain(format!("state {state:?} outside [0,1]^d"));
        }
        let mut next = state.to_vec();
        self.step(&mut next);
        Ok(next)
    }

    /// Applies the map in place without domain checks.
    pub(crate) fn step(&self, s: &mut [f64]) {
        match self {
            SystemKind::DoublingMap => s[0] = (2.0 * s[0]).rem_euclid(1.0),
            SystemKind::LogisticA4 => s[0] = 4.0 * s[0] * (1.0 - s[0]),
            SystemKind::TentMap => s[0] = 1.0 - (1.0 - 2.0 * s[0]).abs(),
            SystemKind::CatMap2D => {
                let (x, y) = (s[0], s[1]);
                s[0] = (x + y).rem_euclid(1.0);
                s[1] = (x + 2.0 * y).rem_euclid(1.0);
            }
            SystemKind::PiecewiseExpanding {
                slopes,
                breakpoints,
            } => {
                let x = s[0];
                let i = breakpoints[1..breakpoints.len() - 1]
                    .partition_point(|&b| b <= x)
                    .min(slopes.len() - 1);
                let u = slopes[i] * (x - breakpoints[i]);
                s[0] = if slopes[i] > 0.0 {
                    u.rem_euclid(1.0)
                } else {
                    (1.0 + u).rem_euclid(1.0)
                };
            }
        }
    }

    /// A draw from the invariant measure (approximate, via burn-in, for
    /// piecewise expanding maps).
    pub fn sample_stationary<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            SystemKind::DoublingMap | SystemKind::TentMap => vec![uniform53(rng)],
            SystemKind::LogisticA4 => vec![arcsine_from_uniform(uniform53(rng))],
            SystemKind::CatMap2D => vec![uniform53(rng), uniform53(rng)],
            SystemKind::PiecewiseExpanding { .. } => {
                let mut s = vec![uniform53(rng)];
                for _ in 0..DEFAULT_BURN_IN {
                    self.step(&mut s);
                }
                s
            }
        }
    }
}

/// Maps a uniform variate to the arcsine law via `sin²(πu/2)`.
pub fn arcsine_from_uniform(u: f64) -> f64 {
    let s = (PI * u / 2.0).sin();
    s * s
}

pub(crate) fn uniform53<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (rng.random::<u64>() >> 11) as f64 * TWO_POW_NEG_53
}
