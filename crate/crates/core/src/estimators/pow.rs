//! Power-law core, general and forced.
//!
//! With `a = n_Λ <ln(x/x_min)>_Λ` and `s = n_S <ln(x_min/x)>_S` the first-order
//! conditions at fixed `x_min` are
//! `n (β+1) = a (α-1)(α+β)` and `n (α-1) = s (β+1)(α+β)`.

use super::{stats_loglik, Best};
use crate::error::{Error, Result};
use crate::family::FamilyId;
use crate::sample::{Interval, SortedSample, SplitStats};
use crate::solvers::{newton, SolverConfig};

/// `alpha` maximizing `ln L` at fixed `beta` and `x_min`.
pub(super) fn alpha_hat(n: f64, a: f64, beta: f64) -> f64 {
    0.5 * (1.0 - beta + (beta + 1.0) * (1.0 + 4.0 * n / ((beta + 1.0) * a)).sqrt())
}

/// The two joint stationary points `(alpha, beta)` at fixed `x_min`, admissible or not.
fn joint_candidates(n: f64, a: f64, s: f64) -> [(f64, f64); 2] {
    let g = (a * s).sqrt();
    [(1.0 + n / (a + g), -1.0 + n / (s + g)), (1.0 + n / (a - g), -1.0 + n / (s - g))]
}

fn admissible(alpha: f64, beta: f64) -> bool {
    alpha.is_finite() && alpha > 1.0 && beta.is_finite() && beta > -1.0
}

pub(super) fn fit_beta(stats: &SplitStats, x_min: f64) -> Result<(f64, f64)> {
    let n = stats.n as f64;
    let a = stats.tail_log_excess(x_min);
    let s = stats.core_log_deficit(x_min);
    if !(s > 0.0) {
        return Err(Error::NoValidBeta(format!(
            "every core observation equals x_min = {x_min}; ln L grows without bound in beta"
        )));
    }
    joint_candidates(n, a, s)
        .into_iter()
        .filter(|&(al, b)| admissible(al, b))
        .map(|(al, b)| (al, b, stats_loglik(FamilyId::Pow, al, Some(b), x_min, stats)))
        .max_by(|x, y| x.2.total_cmp(&y.2))
        .map(|(al, b, _)| (al, b))
        .ok_or_else(|| Error::NoValidBeta("both closed-form roots violate beta > -1 or alpha > 1".into()))
}

pub(super) fn scan(sample: &SortedSample, beta: Option<f64>, notes: &mut Vec<String>) -> Best {
    let mut best = Best::default();
    for iv in sample.intervals() {
        let s = &iv.stats;
        let x = iv.lower;
        let a = s.tail_log_excess(x);
        if !(a > 0.0) {
            continue;
        }
        let boundary = match beta {
            Some(b) => Some((alpha_hat(s.n as f64, a, b), b)),
            None => fit_beta(s, x).ok(),
        };
        if let Some((al, b)) = boundary {
            let ll = stats_loglik(FamilyId::Pow, al, Some(b), x, s);
            best.offer_params(FamilyId::Pow, al, Some(b), x, ll, iv.index, true);
        }
        interior(&iv, beta, &mut best);
    }
    if beta.is_none() {
        notes.push("pow interior points use ln x_min = <ln x>_L - n_L/((beta+1) n_S); the printed sign is not stationary".into());
    }
    best
}

/// Interior stationary point for one interval.
///
/// Free `beta`: `beta + 1 = n / (n_S D)`, `alpha = 1 + n / (n_L D)` and
/// `ln x_min = <ln x>_L - n_L / ((beta+1) n_S)`, where `D = <ln x>_L - <ln x>_S`.
/// Pinned `beta`: `alpha = (n + beta n_S) / n_L` with the same `x_min` expression.
pub(super) fn interior(iv: &Interval, beta: Option<f64>, best: &mut Best) {
    let s = &iv.stats;
    if s.n_l == 0 || s.n_s == 0 {
        return;
    }
    let (n, nl, ns) = (s.n as f64, s.n_l as f64, s.n_s as f64);
    let (alpha, b) = match beta {
        None => {
            let d = s.mean_ln_l - s.mean_ln_s;
            if !(d > 0.0) {
                return;
            }
            (1.0 + n / (nl * d), -1.0 + n / (ns * d))
        }
        Some(b) => ((n + b * ns) / nl, b),
    };
    if !admissible(alpha, b) {
        return;
    }
    let x = (s.mean_ln_l - nl / ((b + 1.0) * ns)).exp();
    if x >= iv.lower && x < iv.upper {
        let ll = stats_loglik(FamilyId::Pow, alpha, Some(b), x, s);
        best.offer_params(FamilyId::Pow, alpha, Some(b), x, ll, iv.index, false);
    }
}

fn forced_score(n: f64, alpha: f64) -> f64 {
    n * (alpha * alpha + 1.0) / (alpha * (alpha * alpha - 1.0))
}

/// Root of `n (α²+1)/(α³-α) = a + s` by safeguarded Newton on `(1 + 1e-9, 1e3)`.
pub(super) fn forced_alpha(stats: &SplitStats, x_min: f64, cfg: &SolverConfig) -> Result<f64> {
    let n = stats.n as f64;
    let a = stats.tail_log_excess(x_min);
    let t = a + stats.core_log_deficit(x_min);
    let f = |al: f64| forced_score(n, al) - t;
    let df = |al: f64| {
        let q = al * al;
        -(q * q + 4.0 * q - 1.0) * n / (q * (q - 1.0) * (q - 1.0))
    };
    let x0 = if stats.n_l > 0 && a > 0.0 { 1.0 + stats.n_l as f64 / a } else { 2.0 };
    newton(f, df, x0, (1.0 + 1e-9, 1e3), cfg).map_err(|e| match e {
        Error::NoSignChange { .. } => Error::NoSolutionInRange,
        other => other,
    })
}

pub(super) fn scan_forced(sample: &SortedSample, cfg: &SolverConfig) -> Best {
    let mut best = Best::default();
    for iv in sample.intervals() {
        let s = &iv.stats;
        if let Ok(al) = forced_alpha(s, iv.lower, cfg) {
            let ll = stats_loglik(FamilyId::ForcedPow, al, None, iv.lower, s);
            best.offer_params(FamilyId::ForcedPow, al, None, iv.lower, ll, iv.index, true);
        }
        interior_forced(&iv, &mut best);
    }
    best
}

/// `alpha = n / (n_L - n_S)` (only for `n_L > n_S`) and the matching `x_min`.
pub(super) fn interior_forced(iv: &Interval, best: &mut Best) {
    let s = &iv.stats;
    if s.n_l <= s.n_s {
        return;
    }
    let (n, nl, ns) = (s.n as f64, s.n_l as f64, s.n_s as f64);
    let alpha = n / (nl - ns);
    let core = if s.n_s > 0 { ns * s.mean_ln_s } else { 0.0 };
    let ln_x = (nl * s.mean_ln_l - core - forced_score(n, alpha)) / (nl - ns);
    let x = ln_x.exp();
    if x >= iv.lower && x < iv.upper {
        let ll = stats_loglik(FamilyId::ForcedPow, alpha, None, x, s);
        best.offer_params(FamilyId::ForcedPow, alpha, None, x, ll, iv.index, false);
    }
}
