use cmixlab::data::Dataset;
use cmixlab::forecasting::{build_pairs, build_pairs_iid, forecast_risk_mc, train_forecaster};
use cmixlab::learners::{
    fit_lssvm, fit_quantile_svm, make_hypergrid, tv_svm, GaussianKernel, HyperGrid, KernelModel,
    QUANTILE_MAX_ITER, QUANTILE_TOL,
};
use cmixlab::losses::{LossKind, LossSpec};
use cmixlab::processes::{NoiseModel, SystemKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_problem(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.random::<f64>()]).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| (5.0 * x[0]).sin() + rng.random_range(-0.3..0.3))
        .collect();
    Dataset::new(xs, ys).unwrap()
}

/// Residual of the normal equations `(K + nλI)α = y`, computed pointwise.
fn normal_equation_residual(data: &Dataset, model: &KernelModel) -> f64 {
    let n = data.len();
    let k = model.kernel();
    let alpha = model.coefficients();
    (0..n)
        .map(|i| {
            let ka: f64 = (0..n)
                .map(|j| k.eval(&data.inputs()[i], &data.inputs()[j]) * alpha[j])
                .sum();
            (ka + n as f64 * model.lambda() * alpha[i] - data.targets()[i]).abs()
        })
        .fold(0.0, f64::max)
}

fn lssvm_objective(data: &Dataset, model: &KernelModel) -> f64 {
    let n = data.len() as f64;
    let fit: f64 = data
        .inputs()
        .iter()
        .zip(data.targets())
        .map(|(x, y)| (y - model.predict(x).unwrap()).powi(2))
        .sum::<f64>()
        / n;
    model.regularizer() + fit
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lssvm_solves_normal_equations(seed in any::<u64>(), log_lambda in -4.0f64..0.0, sigma in 0.05f64..1.0) {
        let data = random_problem(200, seed);
        let lambda = 10f64.powf(log_lambda);
        let model = fit_lssvm(&data, lambda, &GaussianKernel::new(sigma).unwrap(), 2.0).unwrap();
        let ymax = data.targets().iter().fold(0.0f64, |m, y| m.max(y.abs()));
        prop_assert!(normal_equation_residual(&data, &model) < 1e-8 * ymax);
        let mean_sq = data.targets().iter().map(|y| y * y).sum::<f64>() / data.len() as f64;
        prop_assert!(lssvm_objective(&data, &model) <= mean_sq * (1.0 + 1e-12));
    }

    #[test]
    fn model_json_round_trips(seed in any::<u64>(), sigma in 0.01f64..10.0, lambda in 1e-8f64..1.0) {
        let data = random_problem(12, seed);
        let model = fit_lssvm(&data, lambda, &GaussianKernel::new(sigma).unwrap(), 1.5).unwrap();
        let back = KernelModel::from_json(&model.to_json()).unwrap();
        prop_assert_eq!(&back, &model);
        for x in [0.0, 0.37, 1.0] {
            prop_assert_eq!(back.predict(&[x]).unwrap(), model.predict(&[x]).unwrap());
        }
    }
}

#[test]
fn quantile_fit_covers_tau_fraction() {
    let data = random_problem(300, 5);
    let kernel = GaussianKernel::new(0.2).unwrap();
    for tau in [0.1, 0.5, 0.9] {
        let fit = fit_quantile_svm(
            &data,
            tau,
            1e-4,
            &kernel,
            5.0,
            QUANTILE_TOL,
            QUANTILE_MAX_ITER,
        )
        .unwrap();
        assert!(fit.converged, "tau {tau}: {} iterations", fit.iterations);
        assert!(fit
            .objective_history
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-12));
        let below = data
            .inputs()
            .iter()
            .zip(data.targets())
            .filter(|(x, y)| **y < fit.model.predict(x).unwrap() - 1e-6)
            .count() as f64
            / data.len() as f64;
        assert!(
            (below - tau).abs() < 0.1,
            "tau {tau}: fraction below {below}"
        );
    }
}

#[test]
fn tv_svm_picks_the_best_grid_point() {
    let data = random_problem(240, 8);
    let loss = LossSpec::new(LossKind::LeastSquares, 1.5, 1.0).unwrap();
    let grid = make_hypergrid(data.len(), 1, 8).unwrap();
    let r = tv_svm(&data, &loss, &grid).unwrap();
    assert_eq!(r.table.len(), grid.len());
    let best = r.table.iter().map(|e| e.risk).fold(f64::INFINITY, f64::min);
    assert_eq!(r.validation_risk, best);
    assert!(grid.lambdas.contains(&r.lambda) && grid.sigmas.contains(&r.sigma));
    // the selected model is the one trained on the first part only
    assert_eq!(r.model.support_points().len(), r.train_size);
}

#[test]
fn tv_svm_single_point_grid_equals_direct_fit() {
    let data = random_problem(101, 2);
    let loss = LossSpec::new(LossKind::LeastSquares, 1.5, 1.0).unwrap();
    let grid = HyperGrid::from_values(vec![1e-3], vec![0.3]).unwrap();
    let r = tv_svm(&data, &loss, &grid).unwrap();
    let (train, _) = data.split_at(r.train_size).unwrap();
    let direct = fit_lssvm(&train, 1e-3, &GaussianKernel::new(0.3).unwrap(), 1.5).unwrap();
    for x in [0.1, 0.5, 0.8] {
        let a = r.model.predict(&[x]).unwrap();
        let b = direct.predict(&[x]).unwrap();
        assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
    }
}

fn forecast_risk(n: usize, iid: bool, seed: u64) -> (f64, f64) {
    let sys = SystemKind::DoublingMap;
    let noise = NoiseModel::uniform_box(0.05, 1).unwrap();
    let loss = LossSpec::new(LossKind::LeastSquares, 1.1, 1.0).unwrap();
    let ds = if iid {
        build_pairs_iid(&sys, &noise, n, seed).unwrap()
    } else {
        build_pairs(&sys, &noise, n, seed).unwrap()
    };
    let grid = make_hypergrid(ds.len(), 1, 16).unwrap();
    let f = train_forecaster(&ds, &loss, &grid).unwrap();
    let r = forecast_risk_mc(&f, &sys, &noise, &loss, 100_000, 99).unwrap();
    (r.total.mean, r.total.se)
}

#[test]
fn forecast_risk_decreases_with_n() {
    let risks: Vec<(f64, f64)> = [200, 800, 3200]
        .iter()
        .map(|&n| forecast_risk(n, false, 11))
        .collect();
    for w in risks.windows(2) {
        let (r0, s0) = w[0];
        let (r1, s1) = w[1];
        assert!(r1 <= r0 + 2.0 * (s0 * s0 + s1 * s1).sqrt(), "{risks:?}");
    }
}

#[test]
fn dependent_and_iid_inputs_give_comparable_risk() {
    let (dep, s0) = forecast_risk(1600, false, 21);
    let (iid, s1) = forecast_risk(1600, true, 21);
    let se = (s0 * s0 + s1 * s1).sqrt();
    // MC error alone understates the spread between two trained models, so
    // the tolerance also allows a small relative gap
    assert!(
        (dep - iid).abs() <= 3.0 * se + 0.15 * dep.min(iid),
        "{dep} vs {iid} (se {se})"
    );
}
