use super::Best;
use crate::family::FamilyId;
use crate::sample::{SortedSample, SplitStats};

/// Root of `n / (alpha (alpha - 1)) = a` with `alpha > 1`.
pub(super) fn alpha_hat(n: f64, a: f64) -> f64 {
    0.5 + (0.25 + n / a).sqrt()
}

/// The interior stationary pair `(alpha, x_min)` for a fixed split.
///
/// It solves both first-order conditions but is a saddle of `ln L`, so the
/// uniform-core scan never reports it. `None` when the split has no core or no tail.
pub fn stationary_point(stats: &SplitStats) -> Option<(f64, f64)> {
    if stats.n_l == 0 || stats.n_s == 0 {
        return None;
    }
    let (n, nl) = (stats.n as f64, stats.n_l as f64);
    let alpha = n / nl;
    let ln_x = stats.mean_ln_l - nl / (n - nl);
    Some((alpha, ln_x.exp()))
}

pub(super) fn scan(sample: &SortedSample) -> Best {
    let mut best = Best::default();
    for iv in sample.intervals() {
        let s = &iv.stats;
        let a = s.tail_log_excess(iv.lower);
        if !(a > 0.0) {
            continue;
        }
        let alpha = alpha_hat(s.n as f64, a);
        let ll = super::stats_loglik(FamilyId::Uni, alpha, None, iv.lower, s);
        best.offer_params(FamilyId::Uni, alpha, None, iv.lower, ll, iv.index, true);
    }
    best
}
