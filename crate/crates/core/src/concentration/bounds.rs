use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::processes::MixingRate;

/// Largest sample size the threshold searches will report.
pub const MAX_THRESHOLD: u64 = 1 << 62;

/// Bounds on a test function `h`: `‖h‖ ≤ a`, `‖h‖_∞ ≤ b`, `E_P h² ≤ sigma2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionBounds {
    pub a: f64,
    pub b: f64,
    pub sigma2: f64,
}

impl FunctionBounds {
    pub fn new(a: f64, b: f64, sigma2: f64) -> Result<Self> {
        let fb = Self { a, b, sigma2 };
        fb.validate()?;
        Ok(fb)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return domain(format!("semi-norm bound A = {} must be positive", self.a));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return domain(format!("sup bound B = {} must be positive", self.b));
        }
        if !(self.sigma2 >= 0.0) {
            return domain(format!("variance bound {} must be >= 0", self.sigma2));
        }
        if self.sigma2 > self.b * self.b {
            return domain(format!(
                "variance bound {} exceeds B² = {}",
                self.sigma2,
                self.b * self.b
            ));
        }
        Ok(())
    }
}

/// `(ln n)^{2/γ}`, the dependence penalty in the tail bound.
pub fn log_factor(n: u64, gamma: f64) -> f64 {
    (n as f64).ln().powf(2.0 / gamma)
}

/// The part of the threshold condition that only involves `m` and `γ`.
pub(crate) fn log_condition(m: u64, gamma: f64) -> bool {
    m as f64 / log_factor(m, gamma) >= 4.0
}

fn square_condition(m: u64, k: f64) -> bool {
    let m = m as f64;
    m * m >= k
}

/// `max{ min{m ≥ 3 : m² ≥ k and m/(ln m)^{2/γ} ≥ 4}, e^{3/b} }`.
///
/// `m ↦ m/(ln m)^{2/γ}` falls on `[3, e^{2/γ}]` and rises afterwards, so the
/// smallest admissible `m` is either the smallest `m` passing the square
/// condition or lies in the rising branch, where it is found by doubling and
/// bisection.
pub(crate) fn threshold(k: f64, gamma: f64, b: f64) -> Result<u64> {
    if !(gamma > 0.0) || !(b > 0.0) || !(k >= 0.0) || !k.is_finite() {
        return domain("threshold needs gamma > 0, b > 0 and a finite k >= 0");
    }
    let mut m_lo = (k.sqrt().ceil() as u64).max(3);
    if m_lo >= MAX_THRESHOLD {
        return domain("threshold exceeds the representable range");
    }
    while !square_condition(m_lo, k) {
        m_lo += 1;
    }
    while m_lo > 3 && square_condition(m_lo - 1, k) {
        m_lo -= 1;
    }
    let first = if log_condition(m_lo, gamma) {
        m_lo
    } else {
        let turn = (2.0 / gamma).exp().floor();
        if !(turn < MAX_THRESHOLD as f64) {
            return domain("threshold exceeds the representable range");
        }
        let lo = m_lo.max(turn as u64);
        // log_condition(lo) is false and the condition is monotone above lo
        let mut step = 1u64;
        let mut hi = lo + 1;
        while !log_condition(hi, gamma) {
            step = step.saturating_mul(2);
            hi = lo.saturating_add(step);
            if hi >= MAX_THRESHOLD {
                return domain("threshold exceeds the representable range");
            }
        }
        let mut lo = hi - step.min(hi - lo);
        let mut hi = hi;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if log_condition(mid, gamma) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let mixing_floor = (3.0 / b).exp().ceil();
    if !(mixing_floor < MAX_THRESHOLD as f64) {
        return domain(format!(
            "e^(3/b) with b = {b} exceeds the representable range"
        ));
    }
    Ok(first.max(mixing_floor as u64))
}

/// Smallest sample size from which the tail bound holds.
pub fn n0(rate: &MixingRate, fb: &FunctionBounds) -> Result<u64> {
    rate.validate()?;
    fb.validate()?;
    let k = 808.0 * rate.c * (3.0 * fb.a + fb.b) / fb.b;
    threshold(k, rate.gamma, rate.b)
}

fn require_n(n: u64) -> Result<()> {
    if n < 3 {
        return domain(format!("n = {n} must be at least 3"));
    }
    Ok(())
}

/// `min(1, 2·exp(−nε² / (8 (ln n)^{2/γ} (σ² + εB/3))))`.
pub fn bernstein_tail_bound(n: u64, eps: f64, fb: &FunctionBounds, gamma: f64) -> Result<f64> {
    require_n(n)?;
    fb.validate()?;
    if !(eps >= 0.0) {
        return domain(format!("deviation {eps} must be >= 0"));
    }
    if !(gamma > 0.0) {
        return domain("gamma must be positive");
    }
    if eps == 0.0 {
        return Ok(1.0);
    }
    let denom = 8.0 * log_factor(n, gamma) * (fb.sigma2 + eps * fb.b / 3.0);
    Ok((2.0 * (-(n as f64) * eps * eps / denom).exp()).min(1.0))
}

/// Deviation exceeded with probability at most `2e^{−τ}`:
/// `√(8 (ln n)^{2/γ} σ² τ / n) + 8 (ln n)^{2/γ} B τ / (3n)`.
pub fn bernstein_deviation(n: u64, tau: f64, fb: &FunctionBounds, gamma: f64) -> Result<f64> {
    require_n(n)?;
    fb.validate()?;
    if !(tau > 0.0) {
        return domain(format!("tau = {tau} must be positive"));
    }
    if !(gamma > 0.0) {
        return domain("gamma must be positive");
    }
    let lf = log_factor(n, gamma);
    let n = n as f64;
    Ok((8.0 * lf * fb.sigma2 * tau / n).sqrt() + 8.0 * lf * fb.b * tau / (3.0 * n))
}

/// Number of blocks behind the tail bound: `⌊(ln n)^{2/γ}⌋ + 1`.
pub fn block_count(n: u64, gamma: f64) -> Result<u64> {
    require_n(n)?;
    if !(gamma > 0.0) {
        return domain("gamma must be positive");
    }
    Ok(log_factor(n, gamma).floor() as u64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fb(a: f64, b: f64, s: f64) -> FunctionBounds {
        FunctionBounds::new(a, b, s).unwrap()
    }

    #[test]
    fn n0_reference_value() {
        // 75 is the first m with m/(ln m)^2 >= 4; 75^2 >= 3232; e^1 < 3
        let rate = MixingRate::new(1.0, 3.0, 1.0).unwrap();
        assert_eq!(n0(&rate, &fb(1.0, 1.0, 0.5)).unwrap(), 75);
        assert!(!log_condition(74, 1.0));
        assert!(log_condition(75, 1.0));
    }

    #[test]
    fn n0_with_zero_constant() {
        let rate = MixingRate::new(0.0, 3.0, 1.0).unwrap();
        assert_eq!(n0(&rate, &fb(1.0, 1.0, 0.5)).unwrap(), 75);
        // with gamma large m/(ln m)^{2/γ} is just below m, so 4 fails and 5 passes
        let rate = MixingRate::new(0.0, 3.0, 1e6).unwrap();
        assert_eq!(n0(&rate, &fb(1.0, 1.0, 0.5)).unwrap(), 5);
    }

    #[test]
    fn n0_small_b_is_dominated_by_mixing_floor() {
        let rate = MixingRate::new(0.01, 0.1, 1.0).unwrap();
        let expected = 30f64.exp().ceil() as u64;
        assert_eq!(expected, 10_686_474_581_525);
        assert_eq!(n0(&rate, &fb(0.1, 1.0, 0.5)).unwrap(), expected);
    }

    #[test]
    fn n0_square_branch() {
        // k = 808*100*(3+1)/1 = 323200 -> m >= 569 (568^2 = 322624)
        let rate = MixingRate::new(100.0, 3.0, 1.0).unwrap();
        assert_eq!(n0(&rate, &fb(1.0, 1.0, 0.5)).unwrap(), 569);
    }

    #[test]
    fn n0_unrepresentable() {
        let rate = MixingRate::new(1.0, 1.0, 0.05).unwrap();
        assert!(n0(&rate, &fb(1.0, 1.0, 0.5)).is_err());
    }

    #[test]
    fn tail_bound_examples() {
        assert_eq!(
            bernstein_tail_bound(100, 0.0, &fb(1.0, 3.0, 1.0), 2.0).unwrap(),
            1.0
        );
        let v = bernstein_tail_bound(100, 1.0, &fb(1.0, 3.0, 1.0), 2.0).unwrap();
        let expected = 2.0 * (-100.0 / (8.0 * 100f64.ln() * 2.0)).exp();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.5148).abs() < 5e-5, "{v}");
        let v = bernstein_tail_bound(100, 0.5, &fb(1.0, 1e6, 1e12), 2.0).unwrap();
        assert_eq!(v, 1.0);
        assert!(bernstein_tail_bound(2, 0.5, &fb(1.0, 1.0, 1.0), 2.0).is_err());
        assert!(bernstein_tail_bound(10, -0.5, &fb(1.0, 1.0, 1.0), 2.0).is_err());
    }

    #[test]
    fn deviation_examples() {
        let f = fb(1.0, 3.0, 1.0);
        let v = bernstein_deviation(100, 1.0, &f, 2.0).unwrap();
        assert!((v - 0.9754).abs() < 1e-4, "{v}");
        let tiny = bernstein_deviation(100, 1e-14, &f, 2.0).unwrap();
        assert!(tiny < 1e-6);
        let v = bernstein_deviation(1000, 2.0, &fb(1.0, 0.5, 0.0), 1.0).unwrap();
        let lf = 1000f64.ln().powi(2);
        assert_eq!(v, 8.0 * lf * 0.5 * 2.0 / 3000.0);
        assert!(bernstein_deviation(100, 0.0, &f, 2.0).is_err());
    }

    #[test]
    fn k_choice_examples() {
        assert_eq!(block_count(100, 2.0).unwrap(), 5);
        assert_eq!(block_count(3, 2.0).unwrap(), 2);
        assert_eq!(block_count(1000, f64::INFINITY).unwrap(), 2);
    }

    #[test]
    fn function_bounds_validation() {
        assert!(FunctionBounds::new(0.0, 1.0, 0.1).is_err());
        assert!(FunctionBounds::new(1.0, 0.0, 0.0).is_err());
        assert!(FunctionBounds::new(1.0, 1.0, -0.1).is_err());
        assert!(FunctionBounds::new(1.0, 0.5, 0.3).is_err());
    }
}
