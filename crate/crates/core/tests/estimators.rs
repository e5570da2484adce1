use ppareto::distributions::{log_likelihood, sample};
use ppareto::estimators::{fit, fit_beta, fit_fixed_xmin, fit_pinned, interior_candidate};
use ppareto::{Error, FamilyId, FamilyParams, Pinned, SolverConfig, SortedSample};

fn truth(f: FamilyId) -> FamilyParams {
    let beta = match f {
        FamilyId::Pow => Some(-0.5),
        FamilyId::Exp => Some(1.0),
        FamilyId::Alg => Some(1.0),
        _ => None,
    };
    FamilyParams::new(f, 2.0, beta, 10.0).unwrap()
}

fn data(f: FamilyId, n: usize, seed: u64) -> SortedSample {
    SortedSample::new(&sample(&truth(f), n, seed).unwrap()).unwrap()
}

#[test]
fn fit_beats_generating_parameters() {
    let cfg = SolverConfig::default();
    for f in FamilyId::ALL {
        for seed in 0..3 {
            let s = data(f, 1500, seed);
            let r = fit(f, &s, &cfg).unwrap();
            let ll_true = log_likelihood(&truth(f), &s).unwrap();
            assert!(r.loglik >= ll_true - 1e-9, "{f} seed {seed}: {} < {ll_true}", r.loglik);
            assert!((log_likelihood(&r.params, &s).unwrap() - r.loglik).abs() <= 1e-9 * r.loglik.abs());
        }
    }
}

#[test]
fn reported_interval_contains_x_min() {
    let cfg = SolverConfig::default();
    for f in FamilyId::ALL {
        let s = data(f, 800, 9);
        let r = fit(f, &s, &cfg).unwrap();
        let ys = s.uniques();
        let (lo, hi) = (ys[r.interval_index], ys[r.interval_index + 1]);
        if r.at_boundary {
            assert_eq!(r.params.x_min(), lo, "{f}");
        } else {
            assert!(lo <= r.params.x_min() && r.params.x_min() < hi, "{f}");
        }
    }
}

#[test]
fn fixed_x_min_agrees_with_boundary_winner() {
    let cfg = SolverConfig::default();
    for f in FamilyId::ALL {
        for seed in 0..4 {
            let s = data(f, 1000, seed);
            let r = fit(f, &s, &cfg).unwrap();
            if !r.at_boundary {
                continue;
            }
            let g = fit_fixed_xmin(f, &s, r.params.x_min(), &cfg).unwrap();
            assert!((g.loglik - r.loglik).abs() <= 1e-9 * r.loglik.abs(), "{f}: {} vs {}", g.loglik, r.loglik);
        }
    }
}

#[test]
fn forced_variants_never_beat_the_general_family() {
    let cfg = SolverConfig::default();
    let pairs = [(FamilyId::ForcedPow, FamilyId::Pow), (FamilyId::ForcedExp, FamilyId::Exp), (FamilyId::ForcedAlg, FamilyId::Alg)];
    for (forced, general) in pairs {
        for seed in 0..3 {
            let s = data(forced, 1000, seed);
            let a = fit(forced, &s, &cfg).unwrap().loglik;
            let b = fit(general, &s, &cfg).unwrap().loglik;
            assert!(a <= b + 1e-7 * b.abs(), "{forced} vs {general}, seed {seed}: {a} > {b}");
        }
    }
}

#[test]
fn pinned_exp_is_stationary_in_alpha_and_beta() {
    let cfg = SolverConfig::default();
    let s = data(FamilyId::Exp, 5000, 2);
    let n = s.len() as f64;
    let (a, b) = fit_beta(FamilyId::Exp, &s, 10.0, &cfg).unwrap();
    let ll = |a: f64, b: f64| log_likelihood(&FamilyParams::new(FamilyId::Exp, a, Some(b), 10.0).unwrap(), &s).unwrap();
    let h = 1e-6;
    let da = (ll(a + h, b) - ll(a - h, b)) / (2.0 * h);
    let db = (ll(a, b + h) - ll(a, b - h)) / (2.0 * h);
    assert!(da.abs() <= 1e-6 * n && db.abs() <= 1e-6 * n, "{da} {db}");
}

#[test]
fn alg_profile_has_a_local_maximum_at_beta_hat() {
    let cfg = SolverConfig::default();
    let s = data(FamilyId::Alg, 3000, 1);
    let (_, b) = fit_beta(FamilyId::Alg, &s, 10.0, &cfg).unwrap();
    let profile = |b: f64| fit_pinned(FamilyId::Alg, &s, Pinned { x_min: Some(10.0), beta: Some(b) }, &cfg).unwrap().loglik;
    let at = profile(b);
    assert!(at >= profile(b * 1.01) && at >= profile(b * 0.99));
}

#[test]
fn uni_never_has_an_interior_candidate() {
    let s = data(FamilyId::Uni, 300, 0);
    let cfg = SolverConfig::default();
    assert!((0..s.interval_count()).all(|j| interior_candidate(FamilyId::Uni, &s, j, &cfg).is_none()));
    assert!(fit(FamilyId::Uni, &s, &cfg).unwrap().at_boundary);
}

#[test]
fn interior_candidates_stay_in_their_interval() {
    let cfg = SolverConfig::default();
    for f in [FamilyId::Pow, FamilyId::ForcedPow, FamilyId::Exp, FamilyId::ForcedExp] {
        let s = data(f, 400, 3);
        for j in 0..s.interval_count() {
            if let Some(c) = interior_candidate(f, &s, j, &cfg) {
                let (lo, hi) = (s.uniques()[j], s.uniques()[j + 1]);
                let x = c.params.x_min();
                assert!(lo <= x && x < hi && !c.at_boundary, "{f} j={j}");
            }
        }
    }
}

#[test]
fn rejects_bad_pins_and_tailless_thresholds() {
    let cfg = SolverConfig::default();
    let s = data(FamilyId::Pow, 200, 0);
    let pin_beta = Pinned { x_min: None, beta: Some(1.0) };
    assert!(matches!(fit_pinned(FamilyId::ForcedPow, &s, pin_beta, &cfg), Err(Error::InvalidParams(_))));
    let bad = Pinned { x_min: None, beta: Some(-2.0) };
    assert!(matches!(fit_pinned(FamilyId::Pow, &s, bad, &cfg), Err(Error::InvalidParams(_))));
    let top = *s.values().last().unwrap();
    assert!(matches!(fit_fixed_xmin(FamilyId::Uni, &s, top, &cfg), Err(Error::NoTailData { .. })));
}

#[test]
fn median_error_shrinks_with_sample_size() {
    let cfg = SolverConfig::default();
    let median_err = |n: usize| {
        let mut e: Vec<f64> = (0..20)
            .map(|seed| (fit(FamilyId::Pow, &data(FamilyId::Pow, n, 100 + seed), &cfg).unwrap().params.alpha() - 2.0).abs())
            .collect();
        e.sort_by(f64::total_cmp);
        0.5 * (e[9] + e[10])
    };
    let (a, b, c) = (median_err(1_000), median_err(10_000), median_err(100_000));
    assert!(a >= b && b >= c, "{a} {b} {c}");
}
