//! Exponential core, general and forced.
//!
//! Notation: `φ1(β) = (e^β - 1)/β`, `h(β) = 1/β - 1/(e^β - 1)` (decreasing from 1
//! to 0), `a = n_Λ <ln(x/x_min)>_Λ` and `m = n_S (<x>_S/x_min - 1)`. Then
//! `ln L = n ln C - α a - β m` with `C x_min = 1 / (φ1 + 1/(α-1))`.

use std::sync::OnceLock;

use super::{interval_root, stats_loglik, Best};
use crate::error::{Error, Result};
use crate::family::{FamilyId, EXP_BETA_MIN_ABS};
use crate::numeric::{exp_core_ratio, ln_phi, sigmoid};
use crate::sample::{Interval, SortedSample, SplitStats};
use crate::solvers::{bisect, newton, SolverConfig};

/// Search range for `beta`.
const BETA_LIMIT: f64 = 50.0;

/// `beta` grid with `ln φ1` and `h` tabulated; finer near zero.
pub(super) struct BetaTable {
    beta: Vec<f64>,
    #[cfg_attr(not(test), allow(dead_code))]
    ln_phi1: Vec<f64>,
    phi1: Vec<f64>,
    h: Vec<f64>,
}

pub(super) fn table() -> &'static BetaTable {
    static TABLE: OnceLock<BetaTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut beta = Vec::new();
        let mut b = -BETA_LIMIT;
        while b < -6.0 {
            beta.push(b);
            b += 1.0;
        }
        for k in -60..=60 {
            if k != 0 {
                beta.push(0.1 * f64::from(k));
            }
        }
        let mut b = 7.0;
        while b <= BETA_LIMIT {
            beta.push(b);
            b += 1.0;
        }
        let ln_phi1: Vec<f64> = beta.iter().map(|&b| ln_phi(1, b)).collect();
        let phi1 = ln_phi1.iter().map(|l| l.exp()).collect();
        let h = beta.iter().map(|&b| exp_core_ratio(b)).collect();
        BetaTable { beta, ln_phi1, phi1, h }
    })
}

/// `alpha` maximizing `ln L` at fixed `beta` (through `ln φ1(β)`) and `x_min`.
pub(super) fn alpha_hat(n: f64, a: f64, ln_phi1: f64) -> f64 {
    let r = n / a;
    1.0 + 2.0 * r / (1.0 + (1.0 + 4.0 * ln_phi1.exp() * r).sqrt())
}

/// `∂ ln L / ∂β` along the profile `alpha = alpha_hat(beta)`.
fn profile_slope(n: f64, a: f64, m: f64, ln_phi1: f64, h: f64) -> f64 {
    let alpha = alpha_hat(n, a, ln_phi1);
    let w = sigmoid((alpha - 1.0).ln() + ln_phi1);
    -n * w * (1.0 - h) - m
}

/// [`profile_slope`] from a finite tabulated `φ1`, without transcendental calls.
fn profile_slope_tab(n: f64, a: f64, m: f64, phi1: f64, h: f64) -> f64 {
    let r = n / a;
    let v = 2.0 * r / (1.0 + (1.0 + 4.0 * phi1 * r).sqrt());
    let vp = v * phi1;
    -n * (vp / (1.0 + vp)) * (1.0 - h) - m
}

/// Keeps `beta` outside the excluded band around zero.
fn admissible_beta(b: f64) -> f64 {
    if b.abs() < EXP_BETA_MIN_ABS {
        EXP_BETA_MIN_ABS.copysign(b)
    } else {
        b
    }
}

/// Local maxima of the `beta` profile at fixed `x_min`: roots of the profile slope
/// where it turns from positive to negative.
fn profile_maxima(stats: &SplitStats, x_min: f64, tab: &BetaTable, cfg: &SolverConfig, mut visit: impl FnMut(f64, f64)) {
    let n = stats.n as f64;
    let a = stats.tail_log_excess(x_min);
    let m = stats.core_linear_excess(x_min);
    if stats.n_l == 0 || stats.n_s == 0 || !(a > 0.0) {
        return;
    }
    let slope = |b: f64| profile_slope(n, a, m, ln_phi(1, b), exp_core_ratio(b));
    let mut prev = profile_slope_tab(n, a, m, tab.phi1[0], tab.h[0]);
    for i in 1..tab.beta.len() {
        let cur = profile_slope_tab(n, a, m, tab.phi1[i], tab.h[i]);
        if prev > 0.0 && cur <= 0.0 {
            let bcfg = SolverConfig { tol_x: 1e-14, tol_f: 1e-12 * n, ..*cfg };
            if let Ok(b) = bisect(slope, tab.beta[i - 1], tab.beta[i], &bcfg) {
                let b = admissible_beta(b);
                visit(alpha_hat(n, a, ln_phi(1, b)), b);
            }
        }
        prev = cur;
    }
}

pub(super) fn fit_beta(stats: &SplitStats, x_min: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    profile_maxima(stats, x_min, table(), cfg, |al, b| {
        let ll = stats_loglik(FamilyId::Exp, al, Some(b), x_min, stats);
        if best.map_or(true, |(_, _, l)| ll > l) {
            best = Some((al, b, ll));
        }
    });
    best.filter(|c| c.2.is_finite()).map(|(al, b, _)| (al, b)).ok_or_else(|| {
        Error::NoValidBeta(format!("no maximum of the profile likelihood for |beta| <= {BETA_LIMIT}"))
    })
}

pub(super) fn scan(sample: &SortedSample, beta: Option<f64>, cfg: &SolverConfig, notes: &mut Vec<String>) -> Best {
    let tab = table();
    let mut best = Best::default();
    for iv in sample.intervals() {
        let s = &iv.stats;
        let x = iv.lower;
        match beta {
            Some(b) => {
                let a = s.tail_log_excess(x);
                if a > 0.0 {
                    let al = alpha_hat(s.n as f64, a, ln_phi(1, b));
                    let ll = stats_loglik(FamilyId::Exp, al, Some(b), x, s);
                    best.offer_params(FamilyId::Exp, al, Some(b), x, ll, iv.index, true);
                }
                interior_pinned(&iv, b, &mut best);
            }
            None => {
                profile_maxima(s, x, tab, cfg, |al, b| {
                    let ll = stats_loglik(FamilyId::Exp, al, Some(b), x, s);
                    best.offer_params(FamilyId::Exp, al, Some(b), x, ll, iv.index, true);
                });
                interior(&iv, tab, cfg, &mut best);
            }
        }
    }
    if beta.is_none() {
        notes.push(format!("beta searched on [-{BETA_LIMIT}, {BETA_LIMIT}] excluding |beta| < {EXP_BETA_MIN_ABS:e}"));
    }
    best
}

/// Interior stationary point with free `beta`.
///
/// Stationarity in `x_min` and `beta` forces `x_min = <x>_S / h(β)` and
/// `α = 1 + (n_S/n_Λ)/φ1(β)`; substituting into the `alpha` condition leaves
/// `R(β) = (n_Λ/n_S) φ1(β) - <ln x>_Λ + ln <x>_S - ln h(β) = 0`, with `R` increasing.
pub(super) fn interior(iv: &Interval, tab: &BetaTable, cfg: &SolverConfig, best: &mut Best) {
    let s = &iv.stats;
    if s.n_l == 0 || s.n_s == 0 {
        return;
    }
    let ratio = s.n_l as f64 / s.n_s as f64;
    let c = s.mean_ln_l - s.mean_x_s.ln();
    let r = |ln_phi1: f64, h: f64| ratio * ln_phi1.exp() - c - h.ln();
    let len = tab.beta.len();
    let i = partition_point(len, |i| ratio * tab.phi1[i] - c - tab.h[i].ln() < 0.0);
    if i == 0 || i == len {
        return;
    }
    // x_min = <x>_S / h is increasing in beta; reject brackets that cannot reach the interval
    let (x_lo, x_hi) = (s.mean_x_s / tab.h[i - 1], s.mean_x_s / tab.h[i]);
    if x_hi < iv.lower || x_lo >= iv.upper {
        return;
    }
    let bcfg = SolverConfig { tol_x: 1e-15, tol_f: 1e-14, ..*cfg };
    let Ok(b) = bisect(|b| r(ln_phi(1, b), exp_core_ratio(b)), tab.beta[i - 1], tab.beta[i], &bcfg) else {
        return;
    };
    let b = admissible_beta(b);
    let x = s.mean_x_s / exp_core_ratio(b);
    if x >= iv.lower && x < iv.upper {
        let Some(alpha) = interior_alpha(s, b) else { return };
        let ll = stats_loglik(FamilyId::Exp, alpha, Some(b), x, s);
        best.offer_params(FamilyId::Exp, alpha, Some(b), x, ll, iv.index, false);
    }
}

/// The `alpha` paired with `beta` at an interior stationary point,
/// `1 + (n_S/n_Λ) β/(e^β - 1)`; tends to the uniform-core value `n/n_Λ` as `β -> 0`.
/// `None` without core or tail observations.
pub fn interior_alpha(stats: &SplitStats, beta: f64) -> Option<f64> {
    if stats.n_l == 0 || stats.n_s == 0 {
        return None;
    }
    Some(1.0 + stats.n_s as f64 / (stats.n_l as f64 * ln_phi(1, beta).exp()))
}

/// First index in `0..len` where `pred` is false, for a predicate that is true then false.
fn partition_point(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Interior point with `beta` pinned: `alpha` from the `x_min` condition, then a
/// root in `x_min` of the `alpha` condition.
fn interior_pinned(iv: &Interval, beta: f64, best: &mut Best) {
    let s = &iv.stats;
    if s.n_l == 0 || s.n_s == 0 {
        return;
    }
    let (n, nl, ns) = (s.n as f64, s.n_l as f64, s.n_s as f64);
    let phi1 = ln_phi(1, beta).exp();
    let alpha_at = |x: f64| (n - beta * ns * s.mean_x_s / x) / nl;
    let g = |x: f64| {
        let al = alpha_at(x);
        if !(al > 1.0) {
            return None;
        }
        let v = al - 1.0;
        Some(n / (v * (phi1 * v + 1.0)) - s.tail_log_excess(x))
    };
    if let Some(x) = interval_root(iv.lower, iv.upper, g) {
        let al = alpha_at(x);
        let ll = stats_loglik(FamilyId::Exp, al, Some(beta), x, s);
        best.offer_params(FamilyId::Exp, al, Some(beta), x, ll, iv.index, false);
    }
}

/// `∂ ln L / ∂α` for the forced family; `d = α - 1 + e^{-α}`.
fn forced_score(n: f64, a: f64, m: f64, alpha: f64) -> f64 {
    let d = alpha - 1.0 + (-alpha).exp();
    n / alpha + n / (alpha - 1.0) - n * alpha / d - a - m
}

fn forced_curvature(n: f64, alpha: f64) -> f64 {
    let e = (-alpha).exp();
    let d = alpha - 1.0 + e;
    -n / (alpha * alpha) - n / ((alpha - 1.0) * (alpha - 1.0)) - n * (d - alpha * (1.0 - e)) / (d * d)
}

pub(super) fn forced_alpha(stats: &SplitStats, x_min: f64, cfg: &SolverConfig) -> Result<f64> {
    let n = stats.n as f64;
    let a = stats.tail_log_excess(x_min);
    let m = stats.core_linear_excess(x_min);
    let x0 = if stats.n_l > 0 && a > 0.0 { 1.0 + stats.n_l as f64 / a } else { 2.0 };
    newton(|al| forced_score(n, a, m, al), |al| forced_curvature(n, al), x0, (1.0 + 1e-9, 1e3), cfg).map_err(
        |e| match e {
            Error::NoSignChange { .. } => Error::NoSolutionInRange,
            other => other,
        },
    )
}

pub(super) fn scan_forced(sample: &SortedSample, cfg: &SolverConfig, notes: &mut Vec<String>) -> Best {
    let mut best = Best::default();
    for iv in sample.intervals() {
        let s = &iv.stats;
        if s.n_l > 0 {
            if let Ok(al) = forced_alpha(s, iv.lower, cfg) {
                let ll = stats_loglik(FamilyId::ForcedExp, al, None, iv.lower, s);
                best.offer_params(FamilyId::ForcedExp, al, None, iv.lower, ll, iv.index, true);
            }
        }
        interior_forced(&iv, cfg, &mut best);
    }
    notes.push("forced-exp interval alpha uses n x_min / (n_L x_min + n_S <x>_S)".into());
    best
}

/// Interior point: `alpha = n x / (n_Λ x + n_S <x>_S)` from the `x_min` condition,
/// then bisection in `x_min` on the `alpha` condition.
pub(super) fn interior_forced(iv: &Interval, _cfg: &SolverConfig, best: &mut Best) {
    let s = &iv.stats;
    if s.n_l == 0 || s.n_s == 0 {
        return;
    }
    let (n, nl, ns) = (s.n as f64, s.n_l as f64, s.n_s as f64);
    let alpha_at = |x: f64| n * x / (nl * x + ns * s.mean_x_s);
    let g = |x: f64| {
        let al = alpha_at(x);
        (al > 1.0).then(|| forced_score(n, s.tail_log_excess(x), s.core_linear_excess(x), al))
    };
    if let Some(x) = interval_root(iv.lower, iv.upper, g) {
        let al = alpha_at(x);
        let ll = stats_loglik(FamilyId::ForcedExp, al, None, x, s);
        best.offer_params(FamilyId::ForcedExp, al, None, x, ll, iv.index, false);
    }
}
