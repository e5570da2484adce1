//! Algebraic core `2 - (x/x_min)^β`, general and forced.
//!
//! The core term `Σ_S ln(2 - r_i)`, `r_i = (x_i/x_min)^β`, has no sufficient
//! statistic. For a fixed `β` the scan therefore expands
//! `ln(2 - r) = ln 2 - Σ_k (r/2)^k / k` and carries the power sums
//! `A_k = Σ_S (x_i / y_j)^{kβ}` from one interval to the next, which makes every
//! interval cost `O(K)` instead of `O(n_S)`. The shape parameter is then optimized
//! in an outer one-dimensional search: `β` for the general family (with `α` in
//! closed form) and `α = β` for the forced family.

use super::{tail_excess, Best};
use crate::error::{Error, Result};
use crate::family::FamilyId;
use crate::sample::{Interval, SortedSample, SplitStats};
use crate::solvers::{nelder_mead_1d_bounded, newton, SolverConfig};

/// Series terms; the remainder is below `2^-K` per observation.
const K: usize = 48;
const LANES: usize = 4;
const BETA_RANGE: (f64, f64) = (1e-6, 100.0);
const FORCED_ALPHA_RANGE: (f64, f64) = (1.0 + 1e-6, 100.0);

/// `ln(C x_min)`.
fn ln_c_scaled(alpha: f64, beta: f64) -> f64 {
    (alpha - 1.0).ln() + beta.ln_1p() - (2.0 * alpha * beta - beta + alpha).ln()
}

/// `alpha` maximizing `ln L` at fixed `beta` and `x_min`, with `λ = a / n`.
pub(super) fn alpha_hat(beta: f64, lambda: f64) -> f64 {
    let d = 4.0 * beta + 2.0;
    (3.0 * beta + 1.0) / d + ((1.0 + beta) * (4.0 + lambda + beta * (8.0 + lambda)) / lambda).sqrt() / d
}

/// Core sums at fixed `x_min` from `ln t_i = ln(x_i / x_min)`.
#[derive(Debug, Default, Clone, Copy)]
struct CoreSums {
    /// `Σ ln(2 - r)`
    log: f64,
    /// `Σ r ln t / (2 - r)`
    dlog: f64,
    /// `Σ r (ln t)^2 / (2 - r)^2`
    d2log: f64,
}

fn core_sums(ln_t: &[f64], beta: f64) -> CoreSums {
    let mut s = CoreSums::default();
    for &l in ln_t {
        let r = (beta * l).exp();
        let q = 2.0 - r;
        s.log += q.ln();
        s.dlog += r * l / q;
        s.d2log += r * l * l / (q * q);
    }
    s
}

fn ln_ratios(sample: &SortedSample, stats: &SplitStats, x_min: f64) -> Vec<f64> {
    let ln_x = x_min.ln();
    sample.core_values(stats.n_s).iter().map(|&x| x.ln() - ln_x).collect()
}

/// Log-spaced grid with `count` points on `[lo, hi]`.
fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// Maximizes `obj` over a grid and then by a bounded Nelder–Mead from the best grid point.
fn grid_then_simplex(grid: &[f64], range: (f64, f64), cfg: &SolverConfig, mut obj: impl FnMut(f64) -> f64) -> Option<f64> {
    let (mut x0, mut f0) = (f64::NAN, f64::NEG_INFINITY);
    for &x in grid {
        let f = obj(x);
        if f > f0 {
            (x0, f0) = (x, f);
        }
    }
    if !f0.is_finite() {
        return None;
    }
    let nm = SolverConfig { tol_x: 1e-10, max_iter: 400, simplex_step: 0.05, ..*cfg };
    match nelder_mead_1d_bounded(|x| -obj(x), x0, range.0, range.1, &nm) {
        Ok(x) if obj(x) >= f0 => Some(x),
        _ => Some(x0),
    }
}

pub(super) fn fit_beta(sample: &SortedSample, stats: &SplitStats, x_min: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
    let n = stats.n as f64;
    let a = tail_excess(stats, x_min)?;
    let ln_t = ln_ratios(sample, stats, x_min);
    let profile = |b: f64| {
        let al = alpha_hat(b, a / n);
        n * (ln_c_scaled(al, b) - x_min.ln()) - al * a + core_sums(&ln_t, b).log
    };
    let b = grid_then_simplex(&log_grid(1e-3, 50.0, 25), BETA_RANGE, cfg, profile)
        .ok_or_else(|| Error::NoValidBeta("profile likelihood is not finite for any beta > 0".into()))?;
    Ok((alpha_hat(b, a / n), b))
}

/// Newton–Raphson root of `∂ ln L / ∂α` for the forced family at fixed `x_min`.
pub(super) fn forced_alpha(sample: &SortedSample, stats: &SplitStats, x_min: f64, cfg: &SolverConfig) -> Result<f64> {
    let n = stats.n as f64;
    let a = tail_excess(stats, x_min)?;
    let ln_t = ln_ratios(sample, stats, x_min);
    let score = |al: f64| {
        let q = al * al - 1.0;
        n * (2.0 * al / q - 2.0 / al) - a - core_sums(&ln_t, al).dlog
    };
    let curvature = |al: f64| {
        let q = al * al - 1.0;
        -2.0 * n * (al * al + 1.0) / (q * q) + 2.0 * n / (al * al) - 2.0 * core_sums(&ln_t, al).d2log
    };
    let x0 = 1.0 + stats.n_l as f64 / a;
    newton(score, curvature, x0, (1.0 + 1e-9, 1e3), cfg).map_err(|e| match e {
        Error::NoSignChange { .. } => Error::NoSolutionInRange,
        other => other,
    })
}

/// `2^-k / k` and `2^-k`, `k = 1..=K`.
struct Weights {
    log: [f64; K],
    ratio: [f64; K],
}

const WEIGHTS: Weights = {
    let mut log = [0.0; K];
    let mut ratio = [0.0; K];
    let mut p = 1.0;
    let mut k = 0;
    while k < K {
        p *= 0.5;
        ratio[k] = p;
        log[k] = p / (k + 1) as f64;
        k += 1;
    }
    Weights { log, ratio }
};

/// Power sums `A_k = Σ_S (x_i / y_j)^{kβ}` for the current interval.
struct Series {
    acc: [f64; K],
}

/// `q^k`, `k = 1..=K`.
fn powers(q: f64) -> [f64; K] {
    let mut out = [0.0; K];
    out[0] = q;
    for k in 1..LANES {
        out[k] = out[k - 1] * q;
    }
    let step = out[LANES - 1];
    for k in LANES..K {
        out[k] = out[k - LANES] * step;
    }
    out
}

/// `Σ_k a_k b_k c_k` with independent accumulators.
fn dot3(a: &[f64; K], b: &[f64; K], c: &[f64; K]) -> f64 {
    let mut acc = [0.0; LANES];
    for k in (0..K).step_by(LANES) {
        for l in 0..LANES {
            acc[l] += a[k + l] * b[k + l] * c[k + l];
        }
    }
    acc.iter().sum()
}

impl Series {
    fn direct(core: &[f64], lower: f64, beta: f64) -> Self {
        let mut acc = [0.0; K];
        let ln_lo = lower.ln();
        for &x in core {
            let rk = powers((beta * (x.ln() - ln_lo)).exp());
            for (a, r) in acc.iter_mut().zip(rk) {
                *a += r;
            }
        }
        Self { acc }
    }

    /// Moves from `y_j` to `y_{j+1}` given `qk[k] = (y_j / y_{j+1})^{(k+1)β}` and `added` new core points.
    fn advance(&mut self, qk: &[f64; K], added: f64) {
        for (a, q) in self.acc.iter_mut().zip(qk) {
            *a = *a * q + added;
        }
    }

    /// `(Σ ln(2 - r), Σ r / (2 - r))` given `rk[k] = ρ^{k+1}`, `ρ = (y_j / x)^β`.
    fn sums(&self, n_s: f64, rk: Option<&[f64; K]>) -> (f64, f64) {
        const ONES: [f64; K] = [1.0; K];
        let rk = rk.unwrap_or(&ONES);
        let series = dot3(&self.acc, rk, &WEIGHTS.log);
        let ratio = dot3(&self.acc, rk, &WEIGHTS.ratio);
        (n_s * std::f64::consts::LN_2 - series, ratio)
    }
}

/// `ln L` and its log-scale `x_min` slope along the profile inside one interval.
struct Point {
    loglik: f64,
    slope: f64,
    alpha: f64,
}

/// Scans one interval at fixed shape: the boundary candidate (optional) and an
/// interior root of the `x_min` condition.
#[derive(Clone, Copy)]
struct Shape {
    family: FamilyId,
    beta: f64,
}

impl Shape {
    fn tied(&self) -> bool {
        self.family == FamilyId::ForcedAlg
    }

    /// `rk` holds the powers of `ρ = (y_j / x)^β`; `None` means `x = y_j`.
    fn eval(&self, iv: &Interval, series: &Series, u: f64, rk: Option<&[f64; K]>) -> Point {
        let s = &iv.stats;
        let (n, nl, ns) = (s.n as f64, s.n_l as f64, s.n_s as f64);
        let a = nl * (s.mean_ln_l - u);
        let alpha = if self.tied() {
            self.beta
        } else if a > 0.0 {
            alpha_hat(self.beta, a / n)
        } else {
            f64::INFINITY
        };
        let (core_log, ratio) = series.sums(ns, rk);
        let loglik = n * (ln_c_scaled(alpha, self.beta) - u) - alpha * a + core_log;
        let slope = -n + alpha * nl + self.beta * ratio;
        Point { loglik, slope, alpha }
    }

    fn rho_powers(&self, ul: f64, u: f64) -> [f64; K] {
        powers((self.beta * (ul - u)).exp().min(1.0))
    }

    fn offer(&self, p: &Point, x: f64, iv: &Interval, at_boundary: bool, best: &mut Best) {
        let beta = if self.tied() { None } else { Some(self.beta) };
        best.offer_params(self.family, p.alpha, beta, x, p.loglik, iv.index, at_boundary);
    }

    /// `qk` holds the powers of `(y_j / y_{j+1})^β`.
    /// `(ul, uu)` are the logs of the interval ends.
    fn process(&self, iv: &Interval, (ul, uu): (f64, f64), series: &Series, qk: &[f64; K], with_boundary: bool, best: &mut Best) {
        if iv.stats.n_l == 0 {
            return;
        }
        let lo = self.eval(iv, series, ul, None);
        if with_boundary {
            self.offer(&lo, iv.lower, iv, true, best);
        }
        if !(lo.slope > 0.0) {
            return;
        }
        let hi = self.eval(iv, series, uu, Some(qk));
        if !(hi.slope < 0.0 && hi.loglik.is_finite()) {
            return;
        }
        let du = uu - ul;
        let bound = (lo.loglik + lo.slope * du).max(hi.loglik - hi.slope * du);
        let floor = best.loglik();
        if bound < floor - 1e-9 * floor.abs().max(1.0) {
            return;
        }
        let (mut a, mut b) = (ul, uu);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let p = self.eval(iv, series, mid, Some(&self.rho_powers(ul, mid)));
            if p.slope > 0.0 {
                a = mid;
            } else if p.slope < 0.0 {
                b = mid;
            } else {
                break;
            }
        }
        let u = 0.5 * (a + b);
        let x = u.exp();
        if x > iv.lower && x < iv.upper {
            let p = self.eval(iv, series, u, Some(&self.rho_powers(ul, u)));
            self.offer(&p, x, iv, false, best);
        }
    }
}

/// Best candidate over all intervals at a fixed shape parameter.
fn sweep(sample: &SortedSample, ln_ys: &[f64], shape: Shape) -> Best {
    let mut best = Best::default();
    let ys = sample.uniques();
    let mut series = Series::direct(sample.core_values(sample.core_count_at_unique(0)), ys[0], shape.beta);
    for j in 0..sample.interval_count() {
        let iv = sample.interval(j);
        let qk = powers((shape.beta * (ln_ys[j] - ln_ys[j + 1])).exp());
        shape.process(&iv, (ln_ys[j], ln_ys[j + 1]), &series, &qk, true, &mut best);
        let added = (sample.core_count_at_unique(j + 1) - sample.core_count_at_unique(j)) as f64;
        series.advance(&qk, added);
    }
    best
}

pub(super) fn scan(sample: &SortedSample, beta: Option<f64>, cfg: &SolverConfig, notes: &mut Vec<String>) -> Best {
    let family = FamilyId::Alg;
    if let Some(b) = beta {
        return sweep(sample, &ln_uniques(sample), Shape { family, beta: b });
    }
    notes.push(format!(
        "beta optimized over [{}, {}] on the profile maximized over alpha and x_min",
        BETA_RANGE.0, BETA_RANGE.1
    ));
    outer(sample, cfg, &log_grid(1e-3, 50.0, 25), BETA_RANGE, |b| Shape { family, beta: b })
}

pub(super) fn scan_forced(sample: &SortedSample, cfg: &SolverConfig, notes: &mut Vec<String>) -> Best {
    notes.push("alpha optimized in an outer search; x_min scanned at each alpha".into());
    let grid: Vec<f64> = log_grid(0.02, 20.0, 22).into_iter().map(|d| 1.0 + d).collect();
    outer(sample, cfg, &grid, FORCED_ALPHA_RANGE, |a| Shape { family: FamilyId::ForcedAlg, beta: a })
}

fn outer(
    sample: &SortedSample,
    cfg: &SolverConfig,
    grid: &[f64],
    range: (f64, f64),
    shape: impl Fn(f64) -> Shape,
) -> Best {
    let ln_ys = ln_uniques(sample);
    let Some(b) = grid_then_simplex(grid, range, cfg, |b| sweep(sample, &ln_ys, shape(b)).loglik()) else {
        return Best::default();
    };
    sweep(sample, &ln_ys, shape(b))
}

fn ln_uniques(sample: &SortedSample) -> Vec<f64> {
    sample.uniques().iter().map(|y| y.ln()).collect()
}

/// Interior candidate of one interval with the shape parameter optimized.
pub(super) fn interior(sample: &SortedSample, iv: &Interval, cfg: &SolverConfig, best: &mut Best) {
    interior_with(sample, iv, cfg, &log_grid(1e-3, 50.0, 25), BETA_RANGE, FamilyId::Alg, best);
}

pub(super) fn interior_forced(sample: &SortedSample, iv: &Interval, cfg: &SolverConfig, best: &mut Best) {
    let grid: Vec<f64> = log_grid(0.02, 20.0, 22).into_iter().map(|d| 1.0 + d).collect();
    interior_with(sample, iv, cfg, &grid, FORCED_ALPHA_RANGE, FamilyId::ForcedAlg, best);
}

fn interior_with(
    sample: &SortedSample,
    iv: &Interval,
    cfg: &SolverConfig,
    grid: &[f64],
    range: (f64, f64),
    family: FamilyId,
    best: &mut Best,
) {
    let core = sample.core_values(iv.stats.n_s);
    let ends = (iv.lower.ln(), iv.upper.ln());
    let at = |b: f64| {
        let mut local = Best::default();
        let shape = Shape { family, beta: b };
        let qk = powers((b * (ends.0 - ends.1)).exp());
        shape.process(iv, ends, &Series::direct(core, iv.lower, b), &qk, false, &mut local);
        local
    };
    if let Some(b) = grid_then_simplex(grid, range, cfg, |b| at(b).loglik()) {
        best.merge(at(b));
    }
}
