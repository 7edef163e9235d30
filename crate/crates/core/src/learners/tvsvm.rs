use rayon::prelude::*;
use serde::Serialize;

use super::grid::HyperGrid;
use super::kernel::{cross_kernel, kernel_matrix, GaussianKernel};
use super::model::KernelModel;
use super::quantile::{solve_quantile, QUANTILE_MAX_ITER, QUANTILE_TOL};
use super::solve::{column, to_vec, Spectral};
use crate::data::Dataset;
use crate::error::{domain, Result};
use crate::losses::{clip, LossKind, LossSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationEntry {
    pub lambda: f64,
    pub sigma: f64,
    /// Clipped empirical risk on the validation part.
    pub risk: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvSvmResult {
    /// Trained on the first `train_size` samples with the selected pair.
    pub model: KernelModel,
    pub lambda: f64,
    pub sigma: f64,
    pub validation_risk: f64,
    pub train_size: usize,
    /// One entry per grid pair, σ-major in grid order.
    pub table: Vec<ValidationEntry>,
}

/// Training size `⌊n/2⌋ + 1` of the training/validation split.
pub fn tv_split(n: usize) -> Result<usize> {
    if n < 4 {
        return domain(format!("training/validation needs n >= 4, got {n}"));
    }
    Ok(n / 2 + 1)
}

struct Candidate {
    entry: ValidationEntry,
    alpha: Vec<f64>,
}

/// Whether `a` should be preferred over the incumbent `b`: smaller risk, then
/// smaller λ, then smaller σ.
fn better(a: &ValidationEntry, b: &ValidationEntry) -> bool {
    (a.risk, a.lambda, a.sigma) < (b.risk, b.lambda, b.sigma)
}

/// Trains on the first `⌊n/2⌋ + 1` samples for every grid pair and selects
/// the pair with the smallest clipped validation risk on the rest.
///
/// All λ for one σ share an eigendecomposition of the training kernel matrix.
pub fn tv_svm(data: &Dataset, loss: &LossSpec, grid: &HyperGrid) -> Result<TvSvmResult> {
    loss.validate()?;
    if grid.is_empty() {
        return domain("hyperparameter grid is empty");
    }
    let m = tv_split(data.len())?;
    let (train, valid) = data.split_at(m)?;
    let per_sigma: Vec<Result<(Vec<ValidationEntry>, Candidate)>> = grid
        .sigmas
        .par_iter()
        .map(|&sigma| sweep_lambdas(&train, &valid, loss, &grid.lambdas, sigma))
        .collect();
    let mut table = Vec::with_capacity(grid.len());
    let mut best: Option<Candidate> = None;
    for r in per_sigma {
        let (entries, cand) = r?;
        table.extend(entries);
        if best
            .as_ref()
            .map_or(true, |b| better(&cand.entry, &b.entry))
        {
            best = Some(cand);
        }
    }
    let best = best.expect("grid is nonempty");
    let model = KernelModel::new(
        train.inputs().to_vec(),
        best.alpha,
        GaussianKernel {
            sigma: best.entry.sigma,
        },
        loss.clip_level,
        best.entry.lambda,
        loss.kind,
    )?;
    Ok(TvSvmResult {
        model,
        lambda: best.entry.lambda,
        sigma: best.entry.sigma,
        validation_risk: best.entry.risk,
        train_size: m,
        table,
    })
}

fn sweep_lambdas(
    train: &Dataset,
    valid: &Dataset,
    loss: &LossSpec,
    lambdas: &[f64],
    sigma: f64,
) -> Result<(Vec<ValidationEntry>, Candidate)> {
    let kernel = GaussianKernel::new(sigma)?;
    let k = kernel_matrix(&kernel, train.inputs())?;
    let spectral = Spectral::new(&k)?;
    let cross = cross_kernel(&kernel, valid.inputs(), train.inputs());
    let m = train.len() as f64;
    let mut entries = Vec::with_capacity(lambdas.len());
    let mut best: Option<Candidate> = None;
    for &lambda in lambdas {
        let alpha = match loss.kind {
            LossKind::LeastSquares => spectral.ridge(train.targets(), m * lambda).0,
            LossKind::Pinball { tau } => {
                solve_quantile(
                    &spectral,
                    train.targets(),
                    tau,
                    lambda,
                    QUANTILE_TOL,
                    QUANTILE_MAX_ITER,
                )?
                .alpha
            }
        };
        let pred = to_vec(&(&cross * column(&alpha)));
        let risk = pred
            .iter()
            .zip(valid.targets())
            .map(|(p, y)| loss.loss(*y, clip(*p, loss.clip_level)))
            .sum::<f64>()
            / valid.len() as f64;
        let entry = ValidationEntry {
            lambda,
            sigma,
            risk,
        };
        entries.push(entry);
        if best.as_ref().map_or(true, |b| better(&entry, &b.entry)) {
            best = Some(Candidate { entry, alpha });
        }
    }
    Ok((entries, best.expect("lambda grid is nonempty")))
}
