use cmixlab::concentration::{bernstein_tail_bound, n0, FunctionBounds};
use cmixlab::function_spaces::{
    bv_seminorm, c_norm, check_exp_property, holder_seminorm, seminorm, sup_norm, SampledFunction,
    SeminormKind,
};
use cmixlab::mc;
use cmixlab::processes::{generate_trajectory, MixingRate, SystemKind};
use proptest::prelude::*;
use rand::Rng;

const KINDS: [SeminormKind; 5] = [
    SeminormKind::Null,
    SeminormKind::BoundedVariation,
    SeminormKind::Holder,
    SeminormKind::Lipschitz,
    SeminormKind::C1,
];

/// Strictly increasing grid on [0, 1] with random values.
fn sampled() -> impl Strategy<Value = SampledFunction> {
    (2usize..40)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.001f64..1.0, n),
                prop::collection::vec(-3.0f64..3.0, n),
                0.2f64..=1.0,
            )
        })
        .prop_map(|(gaps, values, alpha)| {
            let mut x = 0.0;
            let xs: Vec<f64> = gaps
                .iter()
                .map(|g| {
                    x += g;
                    x
                })
                .collect();
            SampledFunction::from_1d(&xs, values)
                .unwrap()
                .with_holder_exponent(alpha)
                .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exp_property_holds_for_every_kind(f in sampled()) {
        for kind in KINDS {
            let r = check_exp_property(&f, kind).unwrap();
            prop_assert!(r.holds, "{kind:?}: {r:?}");
        }
    }

    #[test]
    fn c_norm_is_exact_sum(f in sampled()) {
        for kind in KINDS {
            let c = c_norm(&f, kind).unwrap();
            prop_assert_eq!(c.total, c.sup_norm + c.semi_norm);
            prop_assert_eq!(c.sup_norm, sup_norm(&f));
            prop_assert_eq!(c.semi_norm, seminorm(&f, kind).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn refinement_never_decreases_seminorms(f in sampled(), t in 0.0f64..1.0, v in -3.0f64..3.0) {
        let xs: Vec<f64> = f.points().iter().map(|p| p[0]).collect();
        let lo = xs[0];
        let hi = xs[xs.len() - 1];
        let new_x = lo + t * (hi - lo);
        prop_assume!(xs.iter().all(|x| (x - new_x).abs() > 1e-9));
        let mut pts: Vec<(f64, f64)> = xs.iter().copied().zip(f.values().iter().copied()).collect();
        pts.push((new_x, v));
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (rx, rv): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        let refined = SampledFunction::from_1d(&rx, rv).unwrap().with_holder_exponent(f.holder_exponent()).unwrap();
        prop_assert!(bv_seminorm(&refined).unwrap() >= bv_seminorm(&f).unwrap() * (1.0 - 1e-12));
        prop_assert!(holder_seminorm(&refined).unwrap() >= holder_seminorm(&f).unwrap());
    }

    #[test]
    fn affine_composition_scales_lipschitz_seminorm(f in sampled(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let f = f.with_holder_exponent(1.0).unwrap();
        let g = f.map(|v| a * v + b).unwrap();
        let lhs = holder_seminorm(&g).unwrap();
        let rhs = a.abs() * holder_seminorm(&f).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn tail_bound_is_monotone(
        n in 3u64..100_000,
        eps in 0.001f64..2.0,
        b in 0.1f64..5.0,
        frac in 0.0f64..1.0,
        gamma in 0.25f64..3.0,
        dn in 1u64..10_000,
        de in 0.001f64..1.0,
        ds in 0.0f64..1.0,
        db in 0.0f64..1.0,
    ) {
        let fb = FunctionBounds::new(1.0, b, frac * b * b).unwrap();
        let base = bernstein_tail_bound(n, eps, &fb, gamma).unwrap();
        prop_assert!((0.0..=1.0).contains(&base));
        prop_assert!(bernstein_tail_bound(n, eps + de, &fb, gamma).unwrap() <= base);
        // decreasing in n once n/(ln n)^{2/γ} increases, i.e. n ≥ e^{2/γ}
        if (n as f64) >= (2.0 / gamma).exp() {
            prop_assert!(bernstein_tail_bound(n + dn, eps, &fb, gamma).unwrap() <= base);
        }
        let more_var = FunctionBounds::new(1.0, b, (frac + ds * (1.0 - frac)) * b * b).unwrap();
        prop_assert!(bernstein_tail_bound(n, eps, &more_var, gamma).unwrap() >= base);
        let bigger_b = FunctionBounds::new(1.0, b + db, frac * b * b).unwrap();
        prop_assert!(bernstein_tail_bound(n, eps, &bigger_b, gamma).unwrap() >= base);
    }
}

/// Independent threshold: plain linear scan of the defining conditions.
fn n0_by_scan(rate: &MixingRate, fb: &FunctionBounds) -> u64 {
    let k = 808.0 * rate.c * (3.0 * fb.a + fb.b) / fb.b;
    let first = (3u64..)
        .find(|&m| {
            let mf = m as f64;
            mf * mf >= k && mf / mf.ln().powf(2.0 / rate.gamma) >= 4.0
        })
        .unwrap();
    first.max((3.0 / rate.b).exp().ceil() as u64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn n0_agrees_with_linear_scan(
        c in 0.0f64..20.0,
        b in 0.2f64..5.0,
        gamma in 0.5f64..4.0,
        a in 0.01f64..10.0,
        bb in 0.01f64..10.0,
    ) {
        let rate = MixingRate::new(c, b, gamma).unwrap();
        let fb = FunctionBounds::new(a, bb, 0.0).unwrap();
        prop_assert_eq!(n0(&rate, &fb).unwrap(), n0_by_scan(&rate, &fb));
    }
}

/// Kolmogorov–Smirnov distance of a sample to the uniform law on [0, 1].
fn ks_uniform(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn doubling_marginals_stay_uniform() {
    let replicas = 10_000;
    let critical = 1.628 / (replicas as f64).sqrt();
    for k in [0usize, 10, 50] {
        let xs: Vec<f64> = (0..replicas)
            .map(|r| {
                generate_trajectory(&SystemKind::DoublingMap, k + 1, 1000 + r as u64, 0)
                    .unwrap()
                    .state(k)[0]
            })
            .collect();
        let d = ks_uniform(xs);
        assert!(d < critical, "k = {k}: KS = {d}, critical = {critical}");
    }
}

#[test]
fn invariant_measures_are_preserved() {
    let systems = [
        SystemKind::DoublingMap,
        SystemKind::LogisticA4,
        SystemKind::TentMap,
        SystemKind::CatMap2D,
    ];
    let mut rng = mc::rng(77, 0);
    for sys in systems {
        for trial in 0..3 {
            // random Lipschitz h: interpolant through random values on a grid
            let knots: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
            let h = SampledFunction::from_fn_1d(0.0, 1.0, 9, |x| knots[(x * 8.0).round() as usize])
                .unwrap();
            let n = 100_000;
            let mut draws = mc::rng(trial * 31 + 5, 9);
            let (mut a, mut b) = (mc::Moments::default(), mc::Moments::default());
            for _ in 0..n {
                let x = sys.sample_stationary(&mut draws);
                let y = sys.sample_stationary(&mut draws);
                let tx = sys.iterate(&x).unwrap();
                a.push(h.eval_1d(tx[0]));
                b.push(h.eval_1d(y[0]));
            }
            let se = (a.standard_error().powi(2) + b.standard_error().powi(2)).sqrt();
            assert!(
                (a.mean() - b.mean()).abs() < 3.0 * se,
                "{}: {} vs {} (se {se})",
                sys.name(),
                a.mean(),
                b.mean()
            );
        }
    }
}

#[test]
fn trajectories_are_deterministic() {
    let systems = [
        SystemKind::DoublingMap,
        SystemKind::LogisticA4,
        SystemKind::TentMap,
        SystemKind::CatMap2D,
        SystemKind::PiecewiseExpanding {
            slopes: vec![3.0, -2.5],
            breakpoints: vec![0.0, 0.4, 1.0],
        },
    ];
    for sys in systems {
        for burn in [0usize, 17] {
            let a = generate_trajectory(&sys, 500, 42, burn).unwrap();
            let b = generate_trajectory(&sys, 500, 42, burn).unwrap();
            assert_eq!(a.as_flat(), b.as_flat());
            let c = generate_trajectory(&sys, 500, 43, burn).unwrap();
            assert_ne!(a.as_flat(), c.as_flat());
        }
    }
}
