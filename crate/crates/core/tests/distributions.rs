mod common;

use common::{integrate, moment_oracle, parameter_grid, total_mass};
use ppareto::distributions::{cdf, icdf, mean, normalization, pdf, sample, second_moment};
use ppareto::{FamilyId, FamilyParams};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[test]
fn densities_integrate_to_one() {
    for f in FamilyId::ALL {
        for p in parameter_grid(f) {
            let m = total_mass(&p);
            assert!((m - 1.0).abs() < 1e-6, "{p:?}: {m}");
        }
    }
}

#[test]
fn alg_normalization_example() {
    let p = FamilyParams::new(FamilyId::Alg, 2.0, Some(1.0), 10.0).unwrap();
    let c = normalization(&p);
    assert!((c - 0.1 * 2.0 / 5.0).abs() < 1e-15);
    let m = common::core_moment(&p, 0) + common::tail_moment(&p, 0, 1e8) + c * 10.0 * 10.0 / 1e8;
    assert!((m - 1.0).abs() < 1e-6);
}

#[test]
fn cdf_matches_quadrature() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
    for f in FamilyId::ALL {
        for p in parameter_grid(f).into_iter().step_by(3) {
            for _ in 0..4 {
                let x = p.x_min() * rng.random_range(0.05..4.0);
                let num = if x <= p.x_min() {
                    integrate(|t| pdf(&p, x * t.powi(8)).unwrap() * 8.0 * x * t.powi(7), 0.0, 1.0, 1e-14)
                } else {
                    common::core_moment(&p, 0) + integrate(|y| pdf(&p, y).unwrap(), p.x_min(), x, 1e-14)
                };
                let c = cdf(&p, x).unwrap();
                assert!((c - num).abs() < 1e-8, "{p:?} x={x}: {c} vs {num}");
            }
        }
    }
}

#[test]
fn cdf_is_monotone_and_round_trips() {
    for f in FamilyId::ALL {
        for p in parameter_grid(f) {
            let mut prev = 0.0;
            for i in 0..=2000 {
                let x = p.x_min() * 1e-3 * 10f64.powf(i as f64 * 5.0 / 2000.0);
                let c = cdf(&p, x).unwrap();
                assert!(c >= prev, "{p:?} at {x}");
                prev = c;
                let back = icdf(&p, c).unwrap();
                if c < 1.0 - 1e-6 && c > 1e-12 {
                    assert!((cdf(&p, back).unwrap() - c).abs() <= 1e-9 * c.max(1e-3), "{p:?} x={x}");
                }
            }
        }
    }
}

#[test]
fn moments_match_quadrature() {
    for f in FamilyId::ALL {
        for p in parameter_grid(f) {
            if let Ok(m1) = mean(&p) {
                let q = moment_oracle(&p, 1);
                assert!(((m1 - q) / q).abs() < 1e-6, "{p:?}: mean {m1} vs {q}");
            }
            if let Ok(m2) = second_moment(&p) {
                let q = moment_oracle(&p, 2);
                assert!(((m2 - q) / q).abs() < 1e-6, "{p:?}: second moment {m2} vs {q}");
            }
        }
    }
}

#[test]
fn printed_pow_mean_only_holds_on_the_forced_line() {
    let printed = |a: f64, b: f64, xm: f64| xm * 2.0 * (a - 1.0) * a * (b + 1.0) / ((a * a - 4.0) * (a + b));
    for &(a, b) in &[(3.0, 0.0), (3.0, 1.0), (4.0, -0.5), (2.5, 2.0)] {
        let p = FamilyParams::new(FamilyId::Pow, a, Some(b), 1.0).unwrap();
        let q = moment_oracle(&p, 1);
        assert!(((mean(&p).unwrap() - q) / q).abs() < 1e-6);
        assert!(((printed(a, b, 1.0) - q) / q).abs() > 1e-3, "a={a} b={b}");
    }
    let p = FamilyParams::new(FamilyId::Pow, 3.0, Some(3.0), 1.0).unwrap();
    assert!(((printed(3.0, 3.0, 1.0) - mean(&p).unwrap()) / mean(&p).unwrap()).abs() < 1e-12);
}

fn one_sided_slopes(p: &FamilyParams) -> (f64, f64) {
    let xm = p.x_min();
    let h = 1e-4 * xm;
    let f = |x: f64| pdf(p, x).unwrap();
    // second-order one-sided differences
    let left = (3.0 * f(xm) - 4.0 * f(xm - h) + f(xm - 2.0 * h)) / (2.0 * h);
    let right = (-3.0 * f(xm) + 4.0 * f(xm + h) - f(xm + 2.0 * h)) / (2.0 * h);
    (left, right)
}

#[test]
fn forced_exp_and_alg_have_smooth_transition() {
    for f in [FamilyId::ForcedExp, FamilyId::ForcedAlg] {
        for p in parameter_grid(f) {
            let (left, right) = one_sided_slopes(&p);
            assert!((left - right).abs() < 1e-6 * normalization(&p) / p.x_min(), "{p:?}: {left} vs {right}");
        }
    }
}

#[test]
fn forced_pow_has_a_cusp() {
    // the core rises with slope alpha C / x_min and the tail falls with slope -alpha C / x_min
    for p in parameter_grid(FamilyId::ForcedPow) {
        let (left, right) = one_sided_slopes(&p);
        let jump = 2.0 * p.alpha() * normalization(&p) / p.x_min();
        assert!(((left - right) - jump).abs() < 1e-6 * jump, "{p:?}");
    }
}

#[test]
fn fraction_below_transition_matches_cdf() {
    for f in FamilyId::ALL {
        let beta = match f {
            FamilyId::Pow | FamilyId::Exp | FamilyId::Alg => Some(1.0),
            _ => None,
        };
        let p = FamilyParams::new(f, 2.5, beta, 10.0).unwrap();
        let n = 100_000;
        let xs = sample(&p, n, 4).unwrap();
        let frac = xs.iter().filter(|&&x| x <= 10.0).count() as f64 / n as f64;
        let q = cdf(&p, 10.0).unwrap();
        let sigma = (q * (1.0 - q) / n as f64).sqrt();
        assert!((frac - q).abs() < 3.0 * sigma, "{f}: {frac} vs {q}");
    }
}
