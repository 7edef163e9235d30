//! One-step forecasting of noisy observations of a dynamical system with
//! one kernel learner per output coordinate, and Monte Carlo estimates of
//! the separable forecast risk.

use serde::Serialize;

use crate::data::Dataset;
use crate::error::{domain, Result};
use crate::learners::{tv_svm, HyperGrid, KernelModel};
use crate::losses::{clip, LossSpec};
use crate::mc::{self, stream, Estimate, Moments};
use crate::processes::{
    add_noise, generate_iid_surrogate, generate_trajectory, NoiseModel, SystemKind,
};

const RISK_CHUNK: usize = 4096;

/// Input/output pairs `(X_{i−1}, X_i)` of noisy observations
/// `X_i = T^i(S_0) + ε_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastDataset {
    inputs: Vec<Vec<f64>>,
    outputs: Vec<Vec<f64>>,
    system: SystemKind,
    noise: NoiseModel,
    seed: u64,
    /// Built from one path, so input `i + 1` equals output `i`.
    consecutive: bool,
}

impl ForecastDataset {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Vec<f64>] {
        &self.outputs
    }

    pub fn system(&self) -> &SystemKind {
        &self.system
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_consecutive(&self) -> bool {
        self.consecutive
    }
}

fn check_noise(system: &SystemKind, noise: &NoiseModel) -> Result<()> {
    system.validate()?;
    noise.validate()?;
    if noise.dim != system.dim() {
        return domain(format!(
            "noise dimension {} does not match system dimension {}",
            noise.dim,
            system.dim()
        ));
    }
    Ok(())
}

/// `n` noisy observations of one stationary path, paired consecutively into
/// `n − 1` training pairs.
pub fn build_pairs(
    system: &SystemKind,
    noise: &NoiseModel,
    n: usize,
    seed: u64,
) -> Result<ForecastDataset> {
    check_noise(system, noise)?;
    if n < 2 {
        return domain(format!("need at least 2 observations, got {n}"));
    }
    let path = generate_trajectory(system, n, seed, system.default_burn_in())?;
    let obs = add_noise(&path, noise, seed)?;
    Ok(ForecastDataset {
        inputs: obs[..n - 1].to_vec(),
        outputs: obs[1..].to_vec(),
        system: system.clone(),
        noise: *noise,
        seed,
        consecutive: true,
    })
}

/// `n − 1` independent pairs `(x + ε, T(x) + ε')` with `x` drawn from the
/// invariant measure: the same marginal law without temporal dependence.
pub fn build_pairs_iid(
    system: &SystemKind,
    noise: &NoiseModel,
    n: usize,
    seed: u64,
) -> Result<ForecastDataset> {
    check_noise(system, noise)?;
    if n < 2 {
        return domain(format!("need at least 2 observations, got {n}"));
    }
    let starts = generate_iid_surrogate(system, n - 1, seed)?;
    let mut rng = mc::rng(seed, stream::NOISE);
    let d = system.dim();
    let (mut e0, mut e1) = (vec![0.0; d], vec![0.0; d]);
    let mut inputs = Vec::with_capacity(n - 1);
    let mut outputs = Vec::with_capacity(n - 1);
    for x in starts.iter() {
        let mut tx = x.to_vec();
        system.step(&mut tx);
        noise.draw(&mut rng, &mut e0);
        noise.draw(&mut rng, &mut e1);
        inputs.push(x.iter().zip(&e0).map(|(a, e)| a + e).collect());
        outputs.push(tx.iter().zip(&e1).map(|(a, e)| a + e).collect());
    }
    Ok(ForecastDataset {
        inputs,
        outputs,
        system: system.clone(),
        noise: *noise,
        seed,
        consecutive: false,
    })
}

/// The scalar training set `(X_{i−1}, π_j(X_i))` for the 0-based coordinate `j`.
pub fn project_coordinate(ds: &ForecastDataset, j: usize) -> Result<Dataset> {
    if j >= ds.dim() {
        return domain(format!(
            "coordinate {j} out of range for dimension {}",
            ds.dim()
        ));
    }
    Dataset::new(ds.inputs.clone(), ds.outputs.iter().map(|y| y[j]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoordinateSelection {
    pub lambda: f64,
    pub sigma: f64,
    pub validation_risk: f64,
    /// Clipped empirical risk of the selected model on its training part.
    pub train_risk: f64,
}

/// `f = (f^{(1)}, …, f^{(d)})`, one learner per output coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorForecaster {
    models: Vec<KernelModel>,
    selections: Vec<CoordinateSelection>,
}

impl VectorForecaster {
    pub fn new(models: Vec<KernelModel>, selections: Vec<CoordinateSelection>) -> Result<Self> {
        if models.is_empty() || models.len() != selections.len() {
            return domain("need one selection record per coordinate model");
        }
        let d = models[0].dim();
        if models.iter().any(|m| m.dim() != d) {
            return domain("coordinate models must share the input dimension");
        }
        Ok(Self { models, selections })
    }

    pub fn models(&self) -> &[KernelModel] {
        &self.models
    }

    pub fn selections(&self) -> &[CoordinateSelection] {
        &self.selections
    }

    pub fn dim(&self) -> usize {
        self.models.len()
    }

    /// Clipped forecast of every coordinate.
    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.models.iter().map(|m| m.predict_clipped(x)).collect()
    }

    /// Separable regularizer `Σ_j λ_j ‖f^{(j)}‖²_H`.
    pub fn regularizer(&self) -> f64 {
        self.models.iter().map(KernelModel::regularizer).sum()
    }
}

/// Runs training/validation selection independently on every coordinate.
pub fn train_forecaster(
    ds: &ForecastDataset,
    loss: &LossSpec,
    grid: &HyperGrid,
) -> Result<VectorForecaster> {
    let mut models = Vec::with_capacity(ds.dim());
    let mut selections = Vec::with_capacity(ds.dim());
    for j in 0..ds.dim() {
        let data = project_coordinate(ds, j)?;
        let r = tv_svm(&data, loss, grid)?;
        let (train, _) = data.split_at(r.train_size)?;
        let train_risk = crate::losses::empirical_risk(loss, &train, |x| {
            clip(
                r.model.predict(x).expect("dimension checked"),
                loss.clip_level,
            )
        })?;
        selections.push(CoordinateSelection {
            lambda: r.lambda,
            sigma: r.sigma,
            validation_risk: r.validation_risk,
            train_risk,
        });
        models.push(r.model);
    }
    VectorForecaster::new(models, selections)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastRisk {
    /// `Σ_j` of the coordinate means, with the standard error of the
    /// per-draw total loss.
    pub total: Estimate,
    pub per_coordinate: Vec<Estimate>,
}

/// Monte Carlo risk of an arbitrary predictor of the coordinates in `coords`.
///
/// Every draw consumes the same random numbers (state, then input noise,
/// then output noise, full dimension each) regardless of `coords`, so the
/// coordinate sums do not depend on which coordinates are evaluated.
fn risk_pass<P>(
    predict: P,
    coords: &[usize],
    system: &SystemKind,
    noise: &NoiseModel,
    loss: &LossSpec,
    mc_n: usize,
    seed: u64,
) -> Result<(Vec<Moments>, Moments)>
where
    P: Fn(usize, &[f64]) -> f64 + Sync,
{
    check_noise(system, noise)?;
    loss.validate()?;
    if mc_n < 1 {
        return domain("Monte Carlo size must be at least 1");
    }
    let d = system.dim();
    if let Some(&j) = coords.iter().find(|&&j| j >= d) {
        return domain(format!("coordinate {j} out of range for dimension {d}"));
    }
    let parts = mc::chunked(mc_n, RISK_CHUNK, |c, range| {
        let mut rng = mc::rng(mc::replica_seed(seed, c as u64), stream::RISK);
        let mut per = vec![Moments::default(); coords.len()];
        let mut total = Moments::default();
        let (mut e0, mut e1) = (vec![0.0; d], vec![0.0; d]);
        let mut input = vec![0.0; d];
        for _ in range {
            let x = system.sample_stationary(&mut rng);
            let mut tx = x.clone();
            system.step(&mut tx);
            noise.draw(&mut rng, &mut e0);
            noise.draw(&mut rng, &mut e1);
            for i in 0..d {
                input[i] = x[i] + e0[i];
            }
            let mut sum = 0.0;
            for (slot, &j) in coords.iter().enumerate() {
                let l = loss.loss(tx[j] + e1[j], predict(j, &input));
                per[slot].push(l);
                sum += l;
            }
            total.push(sum);
        }
        (per, total)
    });
    let mut per = vec![Moments::default(); coords.len()];
    let mut total = Moments::default();
    for (p, t) in parts {
        for (acc, m) in per.iter_mut().zip(p) {
            *acc = acc.merge(m);
        }
        total = total.merge(t);
    }
    Ok((per, total))
}

fn assemble(per: Vec<Moments>, total: Moments) -> ForecastRisk {
    let per_coordinate: Vec<Estimate> = per.iter().map(Moments::estimate).collect();
    let mean = per_coordinate.iter().map(|e| e.mean).sum();
    ForecastRisk {
        total: Estimate {
            mean,
            se: total.standard_error(),
        },
        per_coordinate,
    }
}

/// Separable forecast risk `E Σ_j L((T(x) + ε₁)_j, f^{(j)}(x + ε₀))` with `x`
/// from the invariant measure and fresh noise.
pub fn forecast_risk_mc(
    forecaster: &VectorForecaster,
    system: &SystemKind,
    noise: &NoiseModel,
    loss: &LossSpec,
    mc_n: usize,
    seed: u64,
) -> Result<ForecastRisk> {
    if forecaster.dim() != system.dim() || forecaster.models[0].dim() != system.dim() {
        return domain("forecaster dimension does not match the system");
    }
    let coords: Vec<usize> = (0..system.dim()).collect();
    let predict = |j: usize, x: &[f64]| {
        forecaster.models[j]
            .predict_clipped(x)
            .expect("dimension checked")
    };
    let (per, total) = risk_pass(predict, &coords, system, noise, loss, mc_n, seed)?;
    Ok(assemble(per, total))
}

/// Risk of a single coordinate model, using the same draws as
/// [`forecast_risk_mc`] with the same seed.
pub fn coordinate_risk_mc(
    model: &KernelModel,
    j: usize,
    system: &SystemKind,
    noise: &NoiseModel,
    loss: &LossSpec,
    mc_n: usize,
    seed: u64,
) -> Result<Estimate> {
    if model.dim() != system.dim() {
        return domain("model dimension does not match the system");
    }
    let predict = |_: usize, x: &[f64]| model.predict_clipped(x).expect("dimension checked");
    let (per, _) = risk_pass(predict, &[j], system, noise, loss, mc_n, seed)?;
    Ok(per[0].estimate())
}

/// Risk of an arbitrary vector predictor `g(x) → forecast`, e.g. the zero
/// forecaster or the map itself.
pub fn predictor_risk_mc<G>(
    g: G,
    system: &SystemKind,
    noise: &NoiseModel,
    loss: &LossSpec,
    mc_n: usize,
    seed: u64,
) -> Result<ForecastRisk>
where
    G: Fn(&[f64]) -> Vec<f64> + Sync,
{
    let coords: Vec<usize> = (0..system.dim()).collect();
    let (per, total) = risk_pass(|j, x| g(x)[j], &coords, system, noise, loss, mc_n, seed)?;
    Ok(assemble(per, total))
}
