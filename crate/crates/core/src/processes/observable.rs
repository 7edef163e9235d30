use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::function_spaces::SampledFunction;

/// A real function of one state coordinate, describable in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Observable {
    /// `s ↦ s[index]`.
    Coordinate {
        #[serde(default)]
        index: usize,
    },
    /// `s ↦ slope·s[index] + intercept`.
    Affine {
        #[serde(default)]
        index: usize,
        slope: f64,
        intercept: f64,
    },
    /// `s ↦ sin(2π·frequency·s[index])`.
    Sin {
        #[serde(default)]
        index: usize,
        frequency: f64,
    },
    /// Piecewise-linear interpolant through `(points, values)` applied to
    /// `s[index]`, constant outside the grid.
    Interpolant {
        #[serde(default)]
        index: usize,
        points: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Observable {
    pub fn identity() -> Self {
        Observable::Coordinate { index: 0 }
    }

    pub fn index(&self) -> usize {
        match self {
            Observable::Coordinate { index }
            | Observable::Affine { index, .. }
            | Observable::Sin { index, .. }
            | Observable::Interpolant { index, .. } => *index,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.index() >= dim {
            return domain(format!(
                "observable reads coordinate {} of a {dim}-dimensional state",
                self.index()
            ));
        }
        match self {
            Observable::Affine {
                slope, intercept, ..
            } if !(slope.is_finite() && intercept.is_finite()) => {
                domain("affine observable needs finite coefficients")
            }
            Observable::Sin { frequency, .. } if !frequency.is_finite() => {
                domain("sin observable needs a finite frequency")
            }
            Observable::Interpolant { .. } => {
                let f = self.sampled().expect("interpolant")?;
                if !f.is_sorted_1d() {
                    return domain("interpolant points must be strictly increasing");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The interpolant as a [`SampledFunction`], for norm computations.
    pub fn sampled(&self) -> Option<Result<SampledFunction>> {
        match self {
            Observable::Interpolant { points, values, .. } => {
                Some(SampledFunction::from_1d(points, values.clone()))
            }
            _ => None,
        }
    }

    /// Evaluates the observable. Assumes [`Self::validate`] passed.
    pub fn eval(&self, s: &[f64]) -> f64 {
        match self {
            Observable::Coordinate { index } => s[*index],
            Observable::Affine {
                index,
                slope,
                intercept,
            } => slope * s[*index] + intercept,
            Observable::Sin { index, frequency } => (2.0 * PI * frequency * s[*index]).sin(),
            Observable::Interpolant {
                index,
                points,
                values,
            } => interpolate(points, values, s[*index]),
        }
    }
}

fn interpolate(xs: &[f64], vs: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if n == 1 || x <= xs[0] {
        return vs[0];
    }
    if x >= xs[n - 1] {
        return vs[n - 1];
    }
    let hi = xs.partition_point(|&p| p <= x);
    let (x0, x1) = (xs[hi - 1], xs[hi]);
    vs[hi - 1] + (vs[hi] - vs[hi - 1]) * (x - x0) / (x1 - x0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation() {
        assert_eq!(Observable::identity().eval(&[0.3]), 0.3);
        let a = Observable::Affine {
            index: 1,
            slope: 2.0,
            intercept: -1.0,
        };
        assert_eq!(a.eval(&[0.0, 0.75]), 0.5);
        let s = Observable::Sin {
            index: 0,
            frequency: 1.0,
        };
        assert!((s.eval(&[0.25]) - 1.0).abs() < 1e-15);
        let p = Observable::Interpolant {
            index: 0,
            points: vec![0.0, 1.0],
            values: vec![-0.5, 0.5],
        };
        assert_eq!(p.eval(&[0.75]), 0.25);
        assert_eq!(p.eval(&[2.0]), 0.5);
    }

    #[test]
    fn validation() {
        assert!(Observable::Coordinate { index: 1 }.validate(1).is_err());
        assert!(Observable::Coordinate { index: 1 }.validate(2).is_ok());
        let p = Observable::Interpolant {
            index: 0,
            points: vec![1.0, 0.0],
            values: vec![0.0, 1.0],
        };
        assert!(p.validate(1).is_err());
        let p = Observable::Interpolant {
            index: 0,
            points: vec![0.0, 1.0],
            values: vec![0.0],
        };
        assert!(p.validate(1).is_err());
    }

    #[test]
    fn json_shape() {
        let o: Observable =
            serde_json::from_str(r#"{"kind":"affine","slope":1.0,"intercept":-0.5}"#).unwrap();
        assert_eq!(o.eval(&[0.5]), 0.0);
        assert!(serde_json::from_str::<Observable>(r#"{"kind":"coordinate","idx":0}"#).is_err());
    }

    #[test]
    fn interpolant_matches_sampled_function() {
        let o = Observable::Interpolant {
            index: 0,
            points: vec![0.0, 0.3, 1.0],
            values: vec![0.2, 1.0, 0.1],
        };
        let f = o.sampled().unwrap().unwrap();
        for x in [-1.0, 0.0, 0.1, 0.3, 0.65, 1.0, 3.0] {
            assert_eq!(o.eval(&[x]), f.eval_1d(x));
        }
    }
}
