//! Learning-rate experiments: regression on inputs drawn from a dynamical
//! system (or i.i.d. from its invariant measure), excess risk against a known
//! target, and the log-log slope of risk against sample size.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{domain, Error, Result};
use crate::learners::{
    fit_lssvm, fit_quantile_svm, make_hypergrid, theoretical_schedule, tv_svm, GaussianKernel,
    KernelModel, DEFAULT_GRID_CAP, QUANTILE_MAX_ITER, QUANTILE_TOL,
};
use crate::losses::{LossKind, LossSpec};
use crate::mc::{self, stream};
use crate::processes::{
    generate_iid_surrogate, generate_trajectory, NoiseModel, Observable, SystemKind,
};

pub const DEFAULT_TEST_SIZE: usize = 100_000;

/// How `(λ, σ)` are chosen for each sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Selection {
    /// Training/validation selection over a capped grid.
    TvSvm {
        #[serde(default = "default_cap")]
        grid_cap: usize,
    },
    /// `λ = 1/n`, `σ = n^{−1/(2t+d)}` for target smoothness `t`.
    Schedule { smoothness: f64 },
}

fn default_cap() -> usize {
    DEFAULT_GRID_CAP
}

impl Default for Selection {
    fn default() -> Self {
        Selection::TvSvm {
            grid_cap: DEFAULT_GRID_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateExperiment {
    pub system: SystemKind,
    /// Target `f*` applied to the state.
    pub target: Observable,
    /// Half-width of the uniform label noise.
    pub noise: f64,
    pub loss: LossSpec,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub selection: Selection,
    /// Draw inputs i.i.d. from the invariant measure instead of along a path.
    pub iid_inputs: bool,
    pub test_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub seed: u64,
    pub lambda: f64,
    pub sigma: f64,
    pub excess_risk: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateSummary {
    pub n: usize,
    pub median_excess_risk: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateResult {
    pub rows: Vec<RateRow>,
    pub summary: Vec<RateSummary>,
    /// Least-squares slope of `log median` on `log n`; `None` with fewer
    /// than two sizes.
    pub slope: Option<f64>,
}

impl RateExperiment {
    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.target.validate(self.system.dim())?;
        self.loss.validate()?;
        NoiseModel::uniform_box(self.noise, 1)?;
        if self.sizes.is_empty() || self.seeds.is_empty() {
            return domain("need at least one sample size and one seed");
        }
        if self.sizes.iter().any(|&n| n < 4) {
            return domain("every sample size must be at least 4");
        }
        if self.test_size < 1 {
            return domain("test set must be nonempty");
        }
        match self.selection {
            Selection::TvSvm { grid_cap } if grid_cap < 1 => domain("grid cap must be at least 1"),
            Selection::Schedule { smoothness } if !(smoothness >= 1.0) => {
                domain("smoothness must be >= 1")
            }
            _ => Ok(()),
        }
    }

    fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        let path = if self.iid_inputs {
            generate_iid_surrogate(&self.system, n, seed)?
        } else {
            generate_trajectory(&self.system, n, seed, self.system.default_burn_in())?
        };
        let noise = NoiseModel::uniform_box(self.noise, 1)?;
        let mut rng = mc::rng(seed, stream::NOISE);
        let mut e = [0.0];
        let mut inputs = Vec::with_capacity(n);
        let mut targets = Vec::with_capacity(n);
        for s in path.iter() {
            noise.draw(&mut rng, &mut e);
            inputs.push(s.to_vec());
            targets.push(self.target.eval(s) + e[0]);
        }
        Dataset::new(inputs, targets)
    }

    fn train(&self, data: &Dataset) -> Result<KernelModel> {
        let n = data.len();
        match self.selection {
            Selection::TvSvm { grid_cap } => {
                let grid = make_hypergrid(n, data.dim(), grid_cap)?;
                Ok(tv_svm(data, &self.loss, &grid)?.model)
            }
            Selection::Schedule { smoothness } => {
                let s = theoretical_schedule(n as u64, smoothness, data.dim())?;
                let kernel = GaussianKernel::new(s.sigma)?;
                match self.loss.kind {
                    LossKind::LeastSquares => {
                        fit_lssvm(data, s.lambda, &kernel, self.loss.clip_level)
                    }
                    LossKind::Pinball { tau } => Ok(fit_quantile_svm(
                        data,
                        tau,
                        s.lambda,
                        &kernel,
                        self.loss.clip_level,
                        QUANTILE_TOL,
                        QUANTILE_MAX_ITER,
                    )?
                    .model),
                }
            }
        }
    }

    /// Excess risk of the clipped model over the Bayes predictor, averaged
    /// over a test sample from the invariant measure. Uses the unscaled loss.
    fn excess_risk(&self, model: &KernelModel, seed: u64) -> Result<f64> {
        let mut rng = mc::rng(seed, stream::TEST_SET);
        let xs: Vec<Vec<f64>> = (0..self.test_size)
            .map(|_| self.system.sample_stationary(&mut rng))
            .collect();
        let parts = mc::chunked(xs.len(), 2048, |_, range| {
            range
                .map(|i| {
                    let x = &xs[i];
                    let u = model.predict_clipped(x)? - self.target.eval(x);
                    Ok(match self.loss.kind {
                        LossKind::LeastSquares => u * u,
                        LossKind::Pinball { tau } => pinball_excess_uniform(u, tau, self.noise),
                    })
                })
                .sum::<Result<f64>>()
        });
        let mut total = 0.0;
        for p in parts {
            total += p?;
        }
        Ok(total / xs.len() as f64)
    }

    pub fn run(&self) -> Result<RateResult> {
        self.validate()?;
        let mut rows = Vec::new();
        let mut summary = Vec::new();
        for &n in &self.sizes {
            let mut risks = Vec::with_capacity(self.seeds.len());
            for &seed in &self.seeds {
                let data = self.sample(n, seed)?;
                let model = self.train(&data)?;
                let excess = self.excess_risk(&model, seed)?;
                rows.push(RateRow {
                    n,
                    seed,
                    lambda: model.lambda(),
                    sigma: model.kernel().sigma,
                    excess_risk: excess,
                });
                risks.push(excess);
            }
            summary.push(RateSummary {
                n,
                median_excess_risk: median(&mut risks),
            });
        }
        let slope = if summary.len() >= 2 {
            let pts: Vec<(f64, f64)> = summary
                .iter()
                .map(|s| ((s.n as f64).ln(), s.median_excess_risk.ln()))
                .collect();
            Some(loglog_slope(&pts)?)
        } else {
            None
        };
        Ok(RateResult {
            rows,
            summary,
            slope,
        })
    }
}

/// Excess pinball risk of predicting `f*(x) + u` when the label noise is
/// uniform on `[−e, e]`: the expected loss minus that of the conditional
/// τ-quantile `f*(x) − e + 2eτ`.
pub fn pinball_excess_uniform(u: f64, tau: f64, e: f64) -> f64 {
    let risk = |u: f64| {
        if u >= e {
            (1.0 - tau) * u
        } else if u <= -e {
            -tau * u
        } else {
            (tau * (e - u).powi(2) + (1.0 - tau) * (u + e).powi(2)) / (4.0 * e)
        }
    };
    let q = -e + 2.0 * e * tau;
    risk(u) - risk(q)
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Ordinary least-squares slope through `(x, y)` points.
pub fn loglog_slope(pts: &[(f64, f64)]) -> Result<f64> {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) || !sxy.is_finite() {
        return Err(Error::Fit("slope needs two distinct finite points".into()));
    }
    Ok(sxy / sxx)
}
