use serde::Serialize;

use super::bounds::{bernstein_tail_bound, n0, FunctionBounds};
use crate::error::{domain, Error, Result};
use crate::function_spaces::{c_norm, SampledFunction, SeminormKind};
use crate::mc::{self, Moments};
use crate::processes::{
    generate_iid_surrogate, generate_trajectory, MixingRate, SystemKind, Trajectory,
};

/// Length of the path used to estimate `E_P h` before centering.
pub const DEFAULT_PILOT_LEN: usize = 1_000_000;

const REPLICA_CHUNK: usize = 32;

#[derive(Debug, Clone)]
pub struct TailValidationConfig {
    pub system: SystemKind,
    pub fb: FunctionBounds,
    pub rate: MixingRate,
    pub n: u64,
    pub eps_grid: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
    pub pilot_len: usize,
    /// Replace each replica path by i.i.d. draws from the invariant measure.
    pub iid_surrogate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailRow {
    pub eps: f64,
    pub empirical_tail: f64,
    pub se: f64,
    pub bound: f64,
    /// `empirical_tail > bound + 3·se`.
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailValidation {
    pub n0: u64,
    pub pilot_mean: f64,
    pub rows: Vec<TailRow>,
}

impl TailValidation {
    pub fn any_violated(&self) -> bool {
        self.rows.iter().any(|r| r.violated)
    }
}

/// A stationary path of the kind replicas are built from.
fn replica_path(system: &SystemKind, n: usize, seed: u64, iid: bool) -> Result<Trajectory> {
    if iid {
        generate_iid_surrogate(system, n, seed)
    } else {
        generate_trajectory(system, n, seed, system.default_burn_in())
    }
}

/// Mean of `h` over a long path seeded past every replica seed.
fn pilot_mean<H>(system: &SystemKind, h: &H, len: usize, seed: u64) -> Result<f64>
where
    H: Fn(&[f64]) -> f64 + Sync,
{
    if len < 1 {
        return domain("pilot length must be at least 1");
    }
    let t = generate_trajectory(system, len, seed, system.default_burn_in())?;
    Ok(t.iter().map(h).sum::<f64>() / len as f64)
}

/// Monte Carlo check of the tail bound: the fraction of replica paths whose
/// centered mean of `h` is at least `ε`, against the bound. The tail is
/// one-sided, as in the bound's statement; apply it to `−h` for the other side.
///
/// Refuses `n < n0`, where the bound is not claimed.
pub fn mc_validate_tail<H>(cfg: &TailValidationConfig, h: H) -> Result<TailValidation>
where
    H: Fn(&[f64]) -> f64 + Sync,
{
    cfg.system.validate()?;
    let threshold = n0(&cfg.rate, &cfg.fb)?;
    if cfg.n < threshold {
        return Err(Error::BelowThreshold {
            n: cfg.n,
            n0: threshold,
        });
    }
    if cfg.replicas == 0 {
        return domain("need at least one replica");
    }
    if cfg.eps_grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return domain("every deviation in the grid must be positive");
    }
    let n = usize::try_from(cfg.n).map_err(|_| Error::Domain("n too large".into()))?;
    let pilot = pilot_mean(
        &cfg.system,
        &h,
        cfg.pilot_len,
        mc::replica_seed(cfg.seed, cfg.replicas as u64),
    )?;

    let chunks = mc::chunked(cfg.replicas, REPLICA_CHUNK, |_, range| {
        range
            .map(|r| {
                let t = replica_path(
                    &cfg.system,
                    n,
                    mc::replica_seed(cfg.seed, r as u64),
                    cfg.iid_surrogate,
                )?;
                Ok(t.iter().map(&h).sum::<f64>() / n as f64 - pilot)
            })
            .collect::<Result<Vec<f64>>>()
    });
    let mut deviations = Vec::with_capacity(cfg.replicas);
    for c in chunks {
        deviations.extend(c?);
    }

    let reps = cfg.replicas as f64;
    let rows = cfg
        .eps_grid
        .iter()
        .map(|&eps| {
            let p = deviations.iter().filter(|&&d| d >= eps).count() as f64 / reps;
            let se = (p * (1.0 - p) / reps).sqrt();
            let bound = bernstein_tail_bound(cfg.n, eps, &cfg.fb, cfg.rate.gamma)?;
            Ok(TailRow {
                eps,
                empirical_tail: p,
                se,
                bound,
                violated: p > bound + 3.0 * se,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TailValidation {
        n0: threshold,
        pilot_mean: pilot,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductBoundReport {
    /// Monte Carlo estimate of `E ∏_{j=0}^{l} f(Z_{jk})`.
    pub lhs_mc: f64,
    pub se: f64,
    /// `2·‖f‖_{L1}^{l+1}` with the norm estimated from a pilot path.
    pub rhs: f64,
    pub l1_norm: f64,
    pub c_norm: f64,
    /// The gap condition `2l‖f‖_C d_k ≤ ‖f‖_{L1}` under which the product
    /// bound is claimed.
    pub assumption_satisfied: bool,
    /// `lhs_mc ≤ rhs + 3·se`.
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct ProductCheckConfig {
    pub system: SystemKind,
    pub rate: MixingRate,
    pub k: usize,
    pub l: usize,
    pub replicas: usize,
    pub seed: u64,
    pub pilot_len: usize,
    pub seminorm: SeminormKind,
}

/// Monte Carlo check of the product bound for a nonnegative function of the
/// first state coordinate sampled at lags `0, k, …, lk`.
pub fn product_bound_mc_check(
    cfg: &ProductCheckConfig,
    f: &SampledFunction,
) -> Result<ProductBoundReport> {
    cfg.system.validate()?;
    cfg.rate.validate()?;
    if !f.is_sorted_1d() {
        return domain("function must be sampled on a strictly increasing 1-D grid");
    }
    if f.values().iter().any(|v| *v < 0.0) {
        return domain("function must be nonnegative");
    }
    if cfg.k < 1 {
        return domain("lag k must be at least 1");
    }
    if cfg.replicas == 0 {
        return domain("need at least one replica");
    }
    let norm = c_norm(f, cfg.seminorm)?.total;
    let eval = |s: &[f64]| f.eval_1d(s[0]);
    let l1 = pilot_mean(
        &cfg.system,
        &eval,
        cfg.pilot_len,
        mc::replica_seed(cfg.seed, cfg.replicas as u64),
    )?;
    let len = cfg.l * cfg.k + 1;

    let parts = mc::chunked(cfg.replicas, REPLICA_CHUNK, |_, range| {
        let mut m = Moments::default();
        for r in range {
            let t = generate_trajectory(
                &cfg.system,
                len,
                mc::replica_seed(cfg.seed, r as u64),
                cfg.system.default_burn_in(),
            )?;
            m.push((0..=cfg.l).map(|j| eval(t.state(j * cfg.k))).product());
        }
        Ok(m)
    });
    let mut m = Moments::default();
    for p in parts {
        m = m.merge(p?);
    }
    let lhs = m.mean();
    let se = if cfg.replicas > 1 {
        m.standard_error()
    } else {
        0.0
    };
    let rhs = 2.0 * l1.powi(cfg.l as i32 + 1);
    let d_k = cfg.rate.d(cfg.k as u64);
    Ok(ProductBoundReport {
        lhs_mc: lhs,
        se,
        rhs,
        l1_norm: l1,
        c_norm: norm,
        assumption_satisfied: 2.0 * cfg.l as f64 * norm * d_k <= l1,
        holds: lhs <= rhs + 3.0 * se,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubling_cfg(n: u64, replicas: usize) -> TailValidationConfig {
        TailValidationConfig {
            system: SystemKind::DoublingMap,
            fb: FunctionBounds::new(1.0, 0.5, 1.0 / 12.0).unwrap(),
            rate: MixingRate::new(1.0, std::f64::consts::LN_2, 1.0).unwrap(),
            n,
            eps_grid: vec![0.01, 0.05, 0.1],
            replicas,
            seed: 5,
            pilot_len: 100_000,
            iid_surrogate: false,
        }
    }

    #[test]
    fn below_threshold_is_refused() {
        let err = mc_validate_tail(&doubling_cfg(50, 10), |s| s[0] - 0.5).unwrap_err();
        assert_eq!(err, Error::BelowThreshold { n: 50, n0: 76 });
    }

    #[test]
    fn doubling_tail_is_below_bound() {
        let v = mc_validate_tail(&doubling_cfg(500, 200), |s| s[0] - 0.5).unwrap();
        assert_eq!(v.rows.len(), 3);
        assert!(!v.any_violated(), "{v:?}");
        assert!(v
            .rows
            .windows(2)
            .all(|w| w[0].empirical_tail >= w[1].empirical_tail));
    }

    #[test]
    fn deviation_beyond_sup_bound_never_happens() {
        let mut cfg = doubling_cfg(500, 100);
        cfg.eps_grid = vec![0.6, 1.0];
        let v = mc_validate_tail(&cfg, |s| s[0] - 0.5).unwrap();
        assert!(v.rows.iter().all(|r| r.empirical_tail == 0.0));
    }

    #[test]
    fn validation_is_deterministic() {
        let a = mc_validate_tail(&doubling_cfg(200, 50), |s| s[0]).unwrap();
        let b = mc_validate_tail(&doubling_cfg(200, 50), |s| s[0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn product_bound_for_constant_one() {
        let f = SampledFunction::from_fn_1d(0.0, 1.0, 5, |_| 1.0).unwrap();
        let cfg = ProductCheckConfig {
            system: SystemKind::DoublingMap,
            rate: MixingRate::new(1.0, std::f64::consts::LN_2, 1.0).unwrap(),
            k: 3,
            l: 4,
            replicas: 100,
            seed: 1,
            pilot_len: 1000,
            seminorm: SeminormKind::Lipschitz,
        };
        let r = product_bound_mc_check(&cfg, &f).unwrap();
        assert_eq!(r.lhs_mc, 1.0);
        assert_eq!(r.rhs, 2.0);
        assert!(r.holds);
    }

    #[test]
    fn product_bound_rejects_negative_functions() {
        let f = SampledFunction::from_fn_1d(0.0, 1.0, 5, |x| x - 0.5).unwrap();
        let cfg = ProductCheckConfig {
            system: SystemKind::DoublingMap,
            rate: MixingRate::new(1.0, 1.0, 1.0).unwrap(),
            k: 3,
            l: 1,
            replicas: 10,
            seed: 1,
            pilot_len: 1000,
            seminorm: SeminormKind::Lipschitz,
        };
        assert!(product_bound_mc_check(&cfg, &f).is_err());
    }
}
