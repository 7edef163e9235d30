use serde::Serialize;

use crate::error::{domain, Result};

fn check(a: f64, sigma: f64, p: f64, eps: f64) -> Result<()> {
    if !(a > 0.0) {
        return domain("a must be positive");
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return domain(format!("sigma = {sigma} must lie in (0, 1]"));
    }
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("p = {p} must lie in (0, 1)"));
    }
    if !(eps > 0.0) {
        return domain("eps must be positive");
    }
    Ok(())
}

/// Entropy-number bound `a σ^{−d} ε^{−2p}` for Gaussian RKHS balls.
pub fn entropy_bound(a: f64, sigma: f64, d: usize, p: f64, eps: f64) -> Result<f64> {
    check(a, sigma, p, eps)?;
    Ok(a * sigma.powi(-(d as i32)) * eps.powf(-2.0 * p))
}

/// `φ(ε) = a σ^{−d} λ^{−p} ε^{−2p}`.
pub fn phi(a: f64, sigma: f64, lambda: f64, d: usize, p: f64, eps: f64) -> Result<f64> {
    check(a, sigma, p, eps)?;
    if !(lambda > 0.0 && lambda <= 1.0) {
        return domain(format!("lambda = {lambda} must lie in (0, 1]"));
    }
    Ok(entropy_bound(a, sigma, d, p, eps)? * lambda.powf(-p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub lambda: f64,
    pub sigma: f64,
    /// Exponent `−2t/(2t + d)` of the learning rate.
    pub rate_exponent: f64,
}

/// `λ_n = 1/n` and `σ_n = n^{−1/(2t+d)}` for targets of smoothness `t`.
pub fn theoretical_schedule(n: u64, t: f64, d: usize) -> Result<Schedule> {
    if n < 1 || !(t >= 1.0) || d < 1 {
        return domain("need n >= 1, t >= 1 and d >= 1");
    }
    let denom = 2.0 * t + d as f64;
    Ok(Schedule {
        lambda: 1.0 / n as f64,
        sigma: (n as f64).powf(-1.0 / denom),
        rate_exponent: -2.0 * t / denom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        assert_eq!(phi(2.0, 0.5, 0.25, 1, 0.5, 1.0).unwrap(), 8.0);
        assert!((phi(1.0, 1.0, 1.0, 3, 0.5, 0.1).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(
            phi(3.0, 0.5, 0.5, 2, 0.3, 1.0).unwrap(),
            3.0 * 4.0 * 0.5f64.powf(-0.3)
        );
        assert!(phi(1.0, 1.0, 1.0, 1, 1.0, 0.1).is_err());
        assert!(entropy_bound(1.0, 1.5, 1, 0.5, 0.1).is_err());
    }

    #[test]
    fn schedule_examples() {
        let s = theoretical_schedule(1000, 1.0, 1).unwrap();
        assert_eq!(s.lambda, 1e-3);
        assert!((s.sigma - 0.1).abs() < 1e-12);
        assert!((s.rate_exponent + 2.0 / 3.0).abs() < 1e-15);
        let s = theoretical_schedule(10, 1e12, 1).unwrap();
        assert!((s.rate_exponent + 1.0).abs() < 1e-9);
        assert!(theoretical_schedule(0, 1.0, 1).is_err());
    }
}
