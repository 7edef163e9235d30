use faer::Mat;

use super::kernel::{kernel_matrix, GaussianKernel};
use super::model::KernelModel;
use super::solve::Spectral;
use crate::data::Dataset;
use crate::error::{domain, Result};
use crate::losses::LossKind;

pub const QUANTILE_TOL: f64 = 1e-8;
pub const QUANTILE_MAX_ITER: usize = 1000;
const INITIAL_SMOOTHING: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFit {
    pub model: KernelModel,
    pub converged: bool,
    pub iterations: usize,
    /// Smoothed objective after each outer iteration; nonincreasing.
    pub objective_history: Vec<f64>,
    /// Unsmoothed objective `λ‖f‖²_H + (1/n) Σ pinball_τ(y_i − f(x_i))`.
    pub objective: f64,
}

/// `|r|` smoothed by a parabola on `(−κ, κ)`.
fn huber(r: f64, kappa: f64) -> f64 {
    let a = r.abs();
    if a >= kappa {
        a
    } else {
        r * r / (2.0 * kappa) + kappa / 2.0
    }
}

fn pinball(r: f64, tau: f64) -> f64 {
    LossKind::Pinball { tau }.raw(r)
}

pub(crate) struct QuantileSolution {
    pub alpha: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub history: Vec<f64>,
    pub objective: f64,
}

/// Majorize-minimize on the smoothed objective
/// `λ‖f‖²_H + (1/n) Σ (huber_κ(r_i)/2 + (τ − ½) r_i)`, `r = y − f`.
///
/// Each step minimizes the quadratic majorizer with weights
/// `w_i = max(|r_i|, κ)`, i.e. solves `(K + 4nλW) α = y + (2τ − 1) w`.
/// κ halves whenever the objective decrease drops below `tol`, and the
/// iteration stops once κ itself is below `tol`.
pub(crate) fn solve_quantile(
    spectral: &Spectral,
    y: &[f64],
    tau: f64,
    lambda: f64,
    tol: f64,
    max_iter: usize,
) -> Result<QuantileSolution> {
    let n = y.len();
    let nf = n as f64;
    let smoothed = |f: &[f64], norm: f64, kappa: f64| {
        lambda * norm
            + y.iter()
                .zip(f)
                .map(|(yi, fi)| {
                    let r = yi - fi;
                    huber(r, kappa) / 2.0 + (tau - 0.5) * r
                })
                .sum::<f64>()
                / nf
    };
    let mut kappa = INITIAL_SMOOTHING;
    let mut alpha = vec![0.0; n];
    let mut f = vec![0.0; n];
    let mut norm = 0.0;
    let mut prev = smoothed(&f, norm, kappa);
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut target = vec![0.0; n];
    let mut d = vec![0.0; n];
    while iterations < max_iter {
        iterations += 1;
        for i in 0..n {
            let w = (y[i] - f[i]).abs().max(kappa);
            target[i] = y[i] + (2.0 * tau - 1.0) * w;
            d[i] = 4.0 * nf * lambda * w;
        }
        let (a, fit, nrm) = spectral.weighted_ridge(&target, &d)?;
        let obj = smoothed(&fit, nrm, kappa);
        // keep the previous iterate if rounding made this step worse
        if obj <= prev {
            alpha = a;
            f = fit;
            norm = nrm;
        }
        let current = obj.min(prev);
        history.push(current);
        if prev - current < tol {
            if kappa < tol {
                converged = true;
                break;
            }
            kappa *= 0.5;
            prev = smoothed(&f, norm, kappa);
        } else {
            prev = current;
        }
    }
    let objective = lambda * norm
        + y.iter()
            .zip(&f)
            .map(|(yi, fi)| pinball(yi - fi, tau))
            .sum::<f64>()
            / nf;
    Ok(QuantileSolution {
        alpha,
        converged,
        iterations,
        history,
        objective,
    })
}

pub(crate) fn validate_quantile_args(tau: f64, lambda: f64, tol: f64) -> Result<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return domain(format!("quantile level {tau} must lie in (0, 1)"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda {lambda} must be positive"));
    }
    if !(tol > 0.0) {
        return domain("tolerance must be positive");
    }
    Ok(())
}

/// Quantile SVM with the τ-pinball loss. Returns the last iterate with
/// `converged = false` if `max_iter` is reached first.
pub fn fit_quantile_svm(
    data: &Dataset,
    tau: f64,
    lambda: f64,
    kernel: &GaussianKernel,
    clip_level: f64,
    tol: f64,
    max_iter: usize,
) -> Result<QuantileFit> {
    validate_quantile_args(tau, lambda, tol)?;
    let k: Mat<f64> = kernel_matrix(kernel, data.inputs())?;
    let spectral = Spectral::new(&k)?;
    let sol = solve_quantile(&spectral, data.targets(), tau, lambda, tol, max_iter)?;
    let model = KernelModel::new(
        data.inputs().to_vec(),
        sol.alpha,
        *kernel,
        clip_level,
        lambda,
        LossKind::Pinball { tau },
    )?;
    Ok(QuantileFit {
        model,
        converged: sol.converged,
        iterations: sol.iterations,
        objective_history: sol.history,
        objective: sol.objective,
    })
}
