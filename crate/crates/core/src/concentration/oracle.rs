use serde::{Deserialize, Serialize};

use super::bounds::{log_factor, threshold};
use crate::error::{domain, Error, Result};

/// Inputs of the oracle inequality for clipped regularized empirical risk
/// minimizers under C-mixing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleInputs {
    /// Variance bound `E(L∘f̆ − L∘f*)² ≤ V (E(L∘f̆ − L∘f*))^ϑ`.
    pub v: f64,
    pub theta: f64,
    /// Entropy exponent `p ∈ (0, 1]`.
    pub p: f64,
    /// `φ(ε/2)`, the entropy-number bound at half the target accuracy.
    pub phi_half_eps: f64,
    pub tau: f64,
    /// Mixing rate `d_n = c·exp(−b·n^γ)`.
    pub c: f64,
    pub b: f64,
    pub gamma: f64,
    pub a0: f64,
    pub a1: f64,
    pub a_star: f64,
    /// Sup bound on the loss of the minimizer.
    pub b0: f64,
    pub n: u64,
    /// Approximation error term `r*`.
    pub r_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConstants {
    pub c_v: f64,
    /// Block length `⌊(ln n)^{2/γ}⌋ + 1`.
    pub k: u64,
    pub n0_star: u64,
    /// Smallest admissible `r`; equals 1 when `saturated`.
    pub r_min: f64,
    /// The fixed-point condition has no solution in `(0, 1]`.
    pub saturated: bool,
}

const FIXED_POINT_TOL: f64 = 1e-12;
const FIXED_POINT_MAX_ITER: usize = 100_000;

impl OracleInputs {
    pub fn validate(&self) -> Result<()> {
        let checks: [(bool, &str); 11] = [
            (self.v >= 1.0 && self.v.is_finite(), "V must be >= 1"),
            (
                (0.0..=1.0).contains(&self.theta),
                "theta must lie in [0, 1]",
            ),
            (self.p > 0.0 && self.p <= 1.0, "p must lie in (0, 1]"),
            (
                self.phi_half_eps > 0.0 && self.phi_half_eps.is_finite(),
                "phi(eps/2) must be positive",
            ),
            (self.tau >= 1.0 && self.tau.is_finite(), "tau must be >= 1"),
            (self.c >= 0.0 && self.c.is_finite(), "c must be >= 0"),
            (self.b > 0.0 && self.b.is_finite(), "b must be > 0"),
            (self.gamma > 0.0, "gamma must be > 0"),
            (
                self.a0 >= 0.0 && self.a1 >= 0.0 && self.a_star >= 0.0,
                "A0, A1, A* must be >= 0",
            ),
            (self.b0 >= 1.0 && self.b0.is_finite(), "B0 must be >= 1"),
            ((0.0..=1.0).contains(&self.r_star), "r* must lie in [0, 1]"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return domain(msg);
            }
        }
        if self.n < 3 {
            return domain(format!("n = {} must be at least 3", self.n));
        }
        Ok(())
    }

    /// Right-hand side of the admissibility condition on `r`.
    fn rhs(&self, c_v: f64, r: f64) -> f64 {
        let lf = log_factor(self.n, self.gamma);
        let n = self.n as f64;
        let variance =
            (c_v * lf * (self.tau + self.phi_half_eps * 2f64.powf(self.p) * r.powf(self.p)) / n)
                .powf(1.0 / (2.0 - self.theta));
        let sup = 20.0 * lf * self.b0 * self.tau / n;
        variance.max(sup).max(self.r_star)
    }
}

pub fn oracle_constants(inputs: &OracleInputs) -> Result<OracleConstants> {
    inputs.validate()?;
    let c_v = 512.0 * (12.0 * inputs.v + 1.0) / 3.0;
    let k = log_factor(inputs.n, inputs.gamma).floor() as u64 + 1;
    let big_k = 1212.0 * inputs.c * (4.0 * inputs.a0 + inputs.a_star + inputs.a1 + 1.0);
    let n0_star = threshold(big_k, inputs.gamma, inputs.b)?;

    // the right-hand side is nondecreasing in r, so iterating from r = 1
    // decreases monotonically to the largest fixed point below 1
    let mut r = 1.0;
    let mut next = inputs.rhs(c_v, r);
    if next > 1.0 {
        return Ok(OracleConstants {
            c_v,
            k,
            n0_star,
            r_min: 1.0,
            saturated: true,
        });
    }
    let mut iter = 0;
    while (r - next).abs() > FIXED_POINT_TOL {
        r = next;
        next = inputs.rhs(c_v, r);
        iter += 1;
        if iter > FIXED_POINT_MAX_ITER {
            return Err(Error::Numerical {
                message: "fixed-point iteration for r did not converge".into(),
                condition_estimate: None,
            });
        }
    }
    Ok(OracleConstants {
        c_v,
        k,
        n0_star,
        r_min: next,
        saturated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(n: u64) -> OracleInputs {
        OracleInputs {
            v: 1.0,
            theta: 1.0,
            p: 0.5,
            phi_half_eps: 10.0,
            tau: 1.0,
            c: 1.0,
            b: 1.0,
            gamma: 1.0,
            a0: 1.0,
            a1: 1.0,
            a_star: 1.0,
            b0: 1.0,
            n,
            r_star: 0.0,
        }
    }

    #[test]
    fn c_v_formula() {
        let o = oracle_constants(&inputs(1_000_000)).unwrap();
        assert!((o.c_v - 512.0 * 13.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn n0_star_matches_brute_scan() {
        let inp = inputs(1_000_000);
        let o = oracle_constants(&inp).unwrap();
        let k = 1212.0 * 7.0;
        let brute = (3u64..)
            .find(|&m| (m * m) as f64 >= k && m as f64 / (m as f64).ln().powi(2) >= 4.0)
            .unwrap()
            .max(3f64.exp().ceil() as u64);
        assert_eq!(o.n0_star, brute);
    }

    #[test]
    fn fixed_point_satisfies_condition() {
        let inp = inputs(100_000_000);
        let o = oracle_constants(&inp).unwrap();
        assert!(!o.saturated);
        assert!(o.r_min > 0.0 && o.r_min < 1.0);
        assert!(inp.rhs(o.c_v, o.r_min) <= o.r_min + 1e-10);
    }

    #[test]
    fn small_n_saturates() {
        let o = oracle_constants(&inputs(100)).unwrap();
        assert!(o.saturated);
        assert_eq!(o.r_min, 1.0);
    }

    #[test]
    fn large_n_approaches_r_star() {
        let mut inp = inputs(u64::MAX / 2);
        inp.r_star = 0.01;
        let o = oracle_constants(&inp).unwrap();
        assert!((o.r_min - 0.01).abs() < 1e-12, "{}", o.r_min);
        inp.r_star = 0.0;
        let o = oracle_constants(&inp).unwrap();
        assert!(o.r_min < 1e-9, "{}", o.r_min);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut inp = inputs(1000);
        inp.v = 0.5;
        assert!(oracle_constants(&inp).is_err());
        let mut inp = inputs(1000);
        inp.p = 0.0;
        assert!(oracle_constants(&inp).is_err());
        assert!(oracle_constants(&inputs(2)).is_err());
    }
}
