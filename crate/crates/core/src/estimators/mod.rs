//! Maximum-likelihood fitting.
//!
//! A global fit scans the intervals `[y_j, y_{j+1})` between consecutive unique
//! observations. Inside one interval the split into core and tail is fixed, so
//! each interval contributes a boundary candidate (`x_min = y_j`, remaining
//! parameters fitted) and possibly interior stationary points. The candidate with
//! the largest log-likelihood wins. Ties within a relative `1e-12` prefer boundary
//! candidates, then the lower interval index.
//!
//! Interval indices are zero-based: interval `j` starts at the `j`-th smallest
//! unique value.

mod alg;
mod exp;
mod pow;
mod uni;

use crate::distributions;
use crate::error::{Error, Result};
use crate::family::{FamilyId, FamilyParams};
use crate::sample::{SortedSample, SplitStats};
use crate::solvers::SolverConfig;

pub use exp::interior_alpha as exp_interior_alpha;
pub use uni::stationary_point as uni_stationary_point;

/// Result of a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: FamilyParams,
    /// `ln L` at `params`, recomputed from the raw observations.
    pub loglik: f64,
    pub n: usize,
    /// Zero-based interval `[y_j, y_{j+1})` holding `x_min`.
    pub interval_index: usize,
    /// Whether `x_min` sits on an observed value rather than strictly inside an interval.
    pub at_boundary: bool,
    pub branch_notes: Vec<String>,
}

/// Parameters held fixed during a fit.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Pinned {
    pub x_min: Option<f64>,
    /// Only meaningful for the families with a free `beta`.
    pub beta: Option<f64>,
}

/// One candidate maximum found by the scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub params: FamilyParams,
    pub loglik: f64,
    pub interval_index: usize,
    pub at_boundary: bool,
}

/// Running maximum over candidates with the deterministic tie-break.
#[derive(Debug, Default)]
pub(crate) struct Best {
    pub(crate) cand: Option<Candidate>,
}

impl Best {
    pub(crate) fn offer(&mut self, c: Candidate) {
        if !c.loglik.is_finite() {
            return;
        }
        let replace = match &self.cand {
            None => true,
            Some(b) => {
                let tol = 1e-12 * b.loglik.abs().max(1.0);
                if c.loglik > b.loglik + tol {
                    true
                } else if (c.loglik - b.loglik).abs() <= tol {
                    (c.at_boundary && !b.at_boundary)
                        || (c.at_boundary == b.at_boundary && c.interval_index < b.interval_index)
                } else {
                    false
                }
            }
        };
        if replace {
            self.cand = Some(c);
        }
    }

    /// Validates the parameters and offers the candidate; invalid sets are dropped.
    pub(crate) fn offer_params(
        &mut self,
        family: FamilyId,
        alpha: f64,
        beta: Option<f64>,
        x_min: f64,
        loglik: f64,
        interval_index: usize,
        at_boundary: bool,
    ) {
        if let Ok(params) = FamilyParams::new(family, alpha, beta, x_min) {
            self.offer(Candidate { params, loglik, interval_index, at_boundary });
        }
    }

    pub(crate) fn loglik(&self) -> f64 {
        self.cand.map_or(f64::NEG_INFINITY, |c| c.loglik)
    }

    pub(crate) fn merge(&mut self, other: Best) {
        if let Some(c) = other.cand {
            self.offer(c);
        }
    }
}

/// Global maximum-likelihood fit over `alpha`, `beta` (where free) and `x_min`.
pub fn fit(family: FamilyId, sample: &SortedSample, cfg: &SolverConfig) -> Result<FitResult> {
    fit_pinned(family, sample, Pinned::default(), cfg)
}

/// Fit with `x_min` held at the given value.
pub fn fit_fixed_xmin(family: FamilyId, sample: &SortedSample, x_min: f64, cfg: &SolverConfig) -> Result<FitResult> {
    fit_pinned(family, sample, Pinned { x_min: Some(x_min), beta: None }, cfg)
}

/// Fit with any combination of `x_min` and `beta` held fixed.
pub fn fit_pinned(family: FamilyId, sample: &SortedSample, pins: Pinned, cfg: &SolverConfig) -> Result<FitResult> {
    cfg.validate()?;
    if let Some(b) = pins.beta {
        if !family.has_free_beta() {
            return Err(Error::InvalidParams(format!("{family} has no free beta to pin")));
        }
        // validates the range of beta for the family
        FamilyParams::new(family, if b == 2.0 { 3.0 } else { 2.0 }, Some(b), 1.0)?;
    }
    let mut notes = Vec::new();
    match pins.x_min {
        Some(x_min) => {
            if !(x_min.is_finite() && x_min > 0.0) {
                return Err(Error::InvalidParams(format!("x_min must be > 0, got {x_min}")));
            }
            let (alpha, beta) = match pins.beta {
                Some(b) => (fit_alpha(family, sample, x_min, Some(b), cfg)?, Some(b)),
                None if family.has_free_beta() => {
                    let (a, b) = fit_beta(family, sample, x_min, cfg)?;
                    (a, Some(b))
                }
                None => (fit_alpha(family, sample, x_min, None, cfg)?, None),
            };
            notes.push(format!("x_min pinned at {x_min}"));
            let params = FamilyParams::new(family, alpha, beta, x_min)?;
            let j = sample.interval_containing(x_min);
            let at_boundary = sample.uniques().binary_search_by(|y| y.total_cmp(&x_min)).is_ok();
            finish(params, sample, j, at_boundary, notes)
        }
        None => {
            let best = match family {
                FamilyId::Uni => uni::scan(sample),
                FamilyId::Pow => pow::scan(sample, pins.beta, &mut notes),
                FamilyId::ForcedPow => pow::scan_forced(sample, cfg),
                FamilyId::Exp => exp::scan(sample, pins.beta, cfg, &mut notes),
                FamilyId::ForcedExp => exp::scan_forced(sample, cfg, &mut notes),
                FamilyId::Alg => alg::scan(sample, pins.beta, cfg, &mut notes),
                FamilyId::ForcedAlg => alg::scan_forced(sample, cfg, &mut notes),
            };
            if let Some(b) = pins.beta {
                notes.push(format!("beta pinned at {b}"));
            }
            let c = best.cand.ok_or_else(|| {
                Error::NoValidFit(format!("no admissible {family} candidate in any of the {} intervals", sample.interval_count()))
            })?;
            finish(c.params, sample, c.interval_index, c.at_boundary, notes)
        }
    }
}

fn finish(
    params: FamilyParams,
    sample: &SortedSample,
    interval_index: usize,
    at_boundary: bool,
    branch_notes: Vec<String>,
) -> Result<FitResult> {
    let loglik = distributions::log_likelihood(&params, sample)?;
    Ok(FitResult { params, loglik, n: sample.len(), interval_index, at_boundary, branch_notes })
}

/// Maximum-likelihood `alpha` with `x_min` (and `beta`, for the general families) fixed.
///
/// `beta` must be given for `Pow`, `Exp` and `Alg` and is ignored otherwise.
pub fn fit_alpha(
    family: FamilyId,
    sample: &SortedSample,
    x_min: f64,
    beta: Option<f64>,
    cfg: &SolverConfig,
) -> Result<f64> {
    let stats = sample.split_at(x_min);
    let a = tail_excess(&stats, x_min)?;
    let n = stats.n as f64;
    let need_beta = || beta.ok_or_else(|| Error::InvalidParams(format!("{family} needs beta to fit alpha")));
    let alpha = match family {
        FamilyId::Uni => uni::alpha_hat(n, a),
        FamilyId::Pow => pow::alpha_hat(n, a, need_beta()?),
        FamilyId::ForcedPow => pow::forced_alpha(&stats, x_min, cfg)?,
        FamilyId::Exp => exp::alpha_hat(n, a, crate::numeric::ln_phi(1, need_beta()?)),
        FamilyId::ForcedExp => exp::forced_alpha(&stats, x_min, cfg)?,
        FamilyId::Alg => alg::alpha_hat(need_beta()?, a / n),
        FamilyId::ForcedAlg => alg::forced_alpha(sample, &stats, x_min, cfg)?,
    };
    if alpha.is_finite() && alpha > 1.0 {
        Ok(alpha)
    } else {
        Err(Error::NoSolutionInRange)
    }
}

/// Joint maximum-likelihood `(alpha, beta)` at fixed `x_min` for `Pow`, `Exp` and `Alg`.
pub fn fit_beta(family: FamilyId, sample: &SortedSample, x_min: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
    let stats = sample.split_at(x_min);
    tail_excess(&stats, x_min)?;
    if stats.n_s == 0 {
        return Err(Error::NoValidBeta(format!("no observations at or below x_min = {x_min}")));
    }
    match family {
        FamilyId::Pow => pow::fit_beta(&stats, x_min),
        FamilyId::Exp => exp::fit_beta(&stats, x_min, cfg),
        FamilyId::Alg => alg::fit_beta(sample, &stats, x_min, cfg),
        _ => Err(Error::InvalidParams(format!("{family} has no free beta"))),
    }
}

/// Stationary point of `ln L` strictly inside interval `j` (zero-based), if one exists.
///
/// `Uni` never has one: its interior stationary point is a saddle.
pub fn interior_candidate(
    family: FamilyId,
    sample: &SortedSample,
    j: usize,
    cfg: &SolverConfig,
) -> Option<Candidate> {
    if j >= sample.interval_count() {
        return None;
    }
    let iv = sample.interval(j);
    let mut best = Best::default();
    match family {
        FamilyId::Uni => {}
        FamilyId::Pow => pow::interior(&iv, None, &mut best),
        FamilyId::ForcedPow => pow::interior_forced(&iv, &mut best),
        FamilyId::Exp => exp::interior(&iv, exp::table(), cfg, &mut best),
        FamilyId::ForcedExp => exp::interior_forced(&iv, cfg, &mut best),
        FamilyId::Alg => alg::interior(sample, &iv, cfg, &mut best),
        FamilyId::ForcedAlg => alg::interior_forced(sample, &iv, cfg, &mut best),
    }
    best.cand
}

/// `n_Λ <ln(x / x_min)>_Λ`, or `NoTailData` when the tail is empty.
fn tail_excess(stats: &SplitStats, x_min: f64) -> Result<f64> {
    let a = stats.tail_log_excess(x_min);
    if stats.n_l == 0 || !(a > 0.0) {
        return Err(Error::NoTailData { x_min });
    }
    Ok(a)
}

/// `ln L` from split statistics; `-inf` for parameters outside the family's domain.
fn stats_loglik(family: FamilyId, alpha: f64, beta: Option<f64>, x_min: f64, stats: &SplitStats) -> f64 {
    FamilyParams::new(family, alpha, beta, x_min)
        .and_then(|p| distributions::log_likelihood_from_stats(&p, stats))
        .unwrap_or(f64::NEG_INFINITY)
}

/// Root of `g` in `ln x` on `[lower, upper)` when `g` changes sign from `+` to `-`.
///
/// `g` returns `None` where the implied parameters are inadmissible.
fn interval_root<G>(lower: f64, upper: f64, mut g: G) -> Option<f64>
where
    G: FnMut(f64) -> Option<f64>,
{
    let gl = g(lower)?;
    let gu = g(upper)?;
    if !(gl > 0.0 && gu < 0.0) {
        return None;
    }
    let (mut lo, mut hi) = (lower.ln(), upper.ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid.exp())?;
        if v > 0.0 {
            lo = mid;
        } else if v < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }
    let x = (0.5 * (lo + hi)).exp().max(lower);
    (x < upper).then_some(x)
}
