//! Test oracles shared by the integration suites.

#![allow(dead_code)]

use ppareto::{distributions, FamilyId, FamilyParams};

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed nodes, center last
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: value and the QUADPACK error estimate.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv = [(0.0, 0.0); 7];
    let mut k = K15_WEIGHTS[7] * fc;
    let mut g = G7_WEIGHTS[3] * fc;
    let mut abs = K15_WEIGHTS[7] * fc.abs();
    for i in 0..7 {
        let d = h * GK_NODES[i];
        let (l, r) = (f(c - d), f(c + d));
        fv[i] = (l, r);
        k += K15_WEIGHTS[i] * (l + r);
        abs += K15_WEIGHTS[i] * (l.abs() + r.abs());
        if i % 2 == 1 {
            g += G7_WEIGHTS[i / 2] * (l + r);
        }
    }
    let mean = 0.5 * k;
    let mut asc = K15_WEIGHTS[7] * (fc - mean).abs();
    for i in 0..7 {
        asc += K15_WEIGHTS[i] * ((fv[i].0 - mean).abs() + (fv[i].1 - mean).abs());
    }
    let (asc, abs) = (asc * h.abs(), abs * h.abs());
    let mut err = ((k - g) * h).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs);
    }
    (k * h, err)
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`, relaxed to the roundoff floor of the integral.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let whole = gk15(&f, a, b);
    let mut panels = vec![(a, b, whole.0, whole.1)];
    for _ in 0..100_000 {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= tol.max(1e-13 * total.abs()) {
            break;
        }
        let (i, _) = panels.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).unwrap();
        let (lo, hi, _, _) = panels.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (l, r) = (gk15(&f, lo, mid), gk15(&f, mid, hi));
        panels.push((lo, mid, l.0, l.1));
        panels.push((mid, hi, r.0, r.1));
    }
    panels.iter().map(|p| p.2).sum()
}

/// `∫_0^{x_min} x^order pdf(x) dx`, substituting `x = x_min t^8` so integrable
/// singularities at zero (power cores with `beta > -7/8`) become smooth.
pub fn core_moment(p: &FamilyParams, order: i32) -> f64 {
    let xm = p.x_min();
    let f = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let x = xm * t.powi(8);
        x.powi(order) * distributions::pdf(p, x).unwrap() * 8.0 * xm * t.powi(7)
    };
    integrate(f, 0.0, 1.0, 1e-14)
}

/// `∫_{x_min}^{X} x^order pdf(x) dx` in the variable `s = ln(x / x_min)`.
pub fn tail_moment(p: &FamilyParams, order: i32, upper: f64) -> f64 {
    let xm = p.x_min();
    let f = |s: f64| {
        let x = xm * s.exp();
        x.powi(order + 1) * distributions::pdf(p, x).unwrap()
    };
    let top = (upper / xm).ln();
    // split so every panel sees a few e-folds at most
    let panels = (top.ceil() as usize).max(1);
    (0..panels).map(|i| integrate(f, top * i as f64 / panels as f64, top * (i + 1) as f64 / panels as f64, 1e-15)).sum()
}

/// Quadrature of the moment of order `order` over `[0, X]` plus the analytic tail remainder beyond `X`.
pub fn moment_oracle(p: &FamilyParams, order: i32) -> f64 {
    let upper = p.x_min() * 1e6;
    let c = distributions::normalization(p);
    let (a, m) = (p.alpha(), order as f64);
    let rest = c * p.x_min().powf(a) * upper.powf(m + 1.0 - a) / (a - m - 1.0);
    core_moment(p, order) + tail_moment(p, order, upper) + rest
}

/// Quadrature of the pdf over `[0, x_min 10^6]` plus the closed-form tail mass beyond.
pub fn total_mass(p: &FamilyParams) -> f64 {
    let upper = p.x_min() * 1e6;
    core_moment(p, 0) + tail_moment(p, 0, upper) + distributions::tail_mass(p, upper).unwrap()
}

/// At least 20 valid parameter sets per family.
pub fn parameter_grid(family: FamilyId) -> Vec<FamilyParams> {
    let alphas = [1.3, 2.0, 2.5, 3.5, 5.0];
    let betas: &[f64] = match family {
        FamilyId::Pow => &[-0.8, -0.3, 0.5, 2.0],
        FamilyId::Exp => &[-3.0, -0.5, 0.7, 4.0],
        FamilyId::Alg => &[0.2, 0.5, 1.0, 3.0],
        _ => &[0.0],
    };
    let x_mins = [0.5, 10.0];
    let mut out = Vec::new();
    if family.has_free_beta() {
        for (i, &a) in alphas.iter().enumerate() {
            for (j, &b) in betas.iter().enumerate() {
                if family == FamilyId::Exp && b == a {
                    continue;
                }
                out.push(FamilyParams::new(family, a, Some(b), x_mins[(i + j) % 2]).unwrap());
            }
        }
    } else {
        for i in 0..20 {
            let a = 1.2 + 0.25 * i as f64;
            out.push(FamilyParams::new(family, a, None, x_mins[i % 2]).unwrap());
        }
    }
    out
}
