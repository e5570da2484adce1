//! Scalar root finders and a one-dimensional Nelder–Mead minimizer.

use crate::error::{Error, Result};

/// Tolerances and iteration limits shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative tolerance on the argument.
    pub tol_x: f64,
    /// Absolute tolerance on the function value (roots only).
    pub tol_f: f64,
    pub max_iter: usize,
    /// Initial simplex step for Nelder–Mead, relative to `max(|x0|, 1)`.
    pub simplex_step: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_x: 1e-10,
            tol_f: 1e-12,
            max_iter: 200,
            simplex_step: 0.1,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tol_x > 0.0
            && self.tol_f > 0.0
            && self.max_iter >= 1
            && self.simplex_step > 0.0
            && self.reflection > 0.0
            && self.expansion > 1.0
            && (0.0..1.0).contains(&self.contraction)
            && (0.0..1.0).contains(&self.shrink)
            && self.contraction > 0.0
            && self.shrink > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("invalid solver configuration {self:?}")))
        }
    }

    fn width_converged(&self, lo: f64, hi: f64) -> bool {
        (hi - lo).abs() <= self.tol_x * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }
}

/// Bisection on `[lo, hi]`; requires `f(lo) * f(hi) < 0` (or a zero endpoint).
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, cfg: &SolverConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.signum() != f_hi.signum()) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid.abs() <= cfg.tol_f {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if cfg.width_converged(lo, hi) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::MaxIterExceeded { iterations: cfg.max_iter })
}

/// Newton's method safeguarded by bisection on `bracket`.
///
/// The bracket must contain a sign change. Any Newton iterate that leaves the
/// current bracket, or that does not at least halve the previous step, is replaced
/// by a bisection step.
pub fn newton<F, D>(mut f: F, mut df: D, x0: f64, bracket: (f64, f64), cfg: &SolverConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let lo_negative = f_lo < 0.0;
    let mut x = if x0 > lo && x0 < hi { x0 } else { 0.5 * (lo + hi) };
    let mut prev_step = hi - lo;
    for _ in 0..cfg.max_iter {
        let fx = f(x);
        if fx.abs() <= cfg.tol_f {
            return Ok(x);
        }
        if (fx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let dfx = df(x);
        let newton_x = x - fx / dfx;
        let step_ok = dfx != 0.0
            && newton_x.is_finite()
            && newton_x > lo
            && newton_x < hi
            && (2.0 * (newton_x - x)).abs() <= prev_step.abs();
        let next = if step_ok { newton_x } else { 0.5 * (lo + hi) };
        prev_step = next - x;
        if next == x || cfg.width_converged(x, next) || cfg.width_converged(lo, hi) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::MaxIterExceeded { iterations: cfg.max_iter })
}

/// Nelder–Mead on a line: minimizes `g` starting from `x0`.
pub fn nelder_mead_1d<G>(g: G, x0: f64, cfg: &SolverConfig) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    nelder_mead_1d_bounded(g, x0, f64::NEG_INFINITY, f64::INFINITY, cfg)
}

/// Nelder–Mead on a line with every trial point clamped to `[lo, hi]`.
pub fn nelder_mead_1d_bounded<G>(mut g: G, x0: f64, lo: f64, hi: f64, cfg: &SolverConfig) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    let clamp = |x: f64| x.max(lo).min(hi);
    // NaN counts as +inf so the simplex moves away from undefined regions.
    let mut eval = |x: f64| {
        let v = g(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let x0 = clamp(x0);
    let step = cfg.simplex_step * x0.abs().max(1.0);
    let mut b = x0;
    let mut w = clamp(x0 + step);
    if w == b {
        w = clamp(x0 - step);
    }
    let mut fb = eval(b);
    let mut fw = eval(w);
    for _ in 0..cfg.max_iter {
        if fw < fb {
            std::mem::swap(&mut b, &mut w);
            std::mem::swap(&mut fb, &mut fw);
        }
        if (w - b).abs() <= cfg.tol_x * b.abs().max(cfg.tol_x) {
            return Ok(b);
        }
        let r = clamp(b + cfg.reflection * (b - w));
        let fr = eval(r);
        if fr < fb {
            let e = clamp(b + cfg.expansion * (r - b));
            let fe = eval(e);
            if fe < fr {
                w = e;
                fw = fe;
            } else {
                w = r;
                fw = fr;
            }
            continue;
        }
        let (c, fc, accept) = if fr < fw {
            let c = clamp(b + cfg.contraction * (r - b));
            let fc = eval(c);
            (c, fc, fc <= fr)
        } else {
            let c = b + cfg.contraction * (w - b);
            let fc = eval(c);
            (c, fc, fc < fw)
        };
        if accept {
            w = c;
            fw = fc;
        } else {
            w = b + cfg.shrink * (w - b);
            fw = eval(w);
        }
    }
    Err(Error::MaxIterExceeded { iterations: cfg.max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 1.0, 2.0, &SolverConfig::default()).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn bisect_needs_sign_change() {
        let e = bisect(|x| x * x + 1.0, -1.0, 2.0, &SolverConfig::default()).unwrap_err();
        assert!(matches!(e, Error::NoSignChange { .. }));
    }

    #[test]
    fn bisect_reports_iteration_limit() {
        let cfg = SolverConfig { max_iter: 3, tol_f: 1e-300, ..SolverConfig::default() };
        let e = bisect(|x| x - 0.123456789, 0.0, 1.0, &cfg).unwrap_err();
        assert_eq!(e, Error::MaxIterExceeded { iterations: 3 });
    }

    #[test]
    fn newton_on_flat_cubic() {
        let cfg = SolverConfig::default();
        let r = newton(|x| x * x * x, |x| 3.0 * x * x, 1.0, (-1.0, 1.0), &cfg).unwrap();
        assert!(r.abs() <= 1e-4, "{r}");
        assert!((r * r * r).abs() <= cfg.tol_f);
    }

    #[test]
    fn newton_falls_back_when_derivative_misleads() {
        // atan has a tiny derivative far from the root; plain Newton diverges from x0 = 3.
        let cfg = SolverConfig::default();
        let r = newton(f64::atan, |x| 1.0 / (1.0 + x * x), 3.0, (-10.0, 10.0), &cfg).unwrap();
        assert!(r.abs() < 1e-10);
    }

    #[test]
    fn newton_quadratic_convergence() {
        let mut calls = 0;
        let r = newton(
            |x| {
                calls += 1;
                x * x - 2.0
            },
            |x| 2.0 * x,
            1.5,
            (0.0, 2.0),
            &SolverConfig::default(),
        )
        .unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(calls < 10);
    }

    #[test]
    fn nelder_mead_parabola() {
        let x = nelder_mead_1d(|x| (x - 3.0) * (x - 3.0), 0.0, &SolverConfig::default()).unwrap();
        assert!((x - 3.0).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_respects_bounds() {
        let cfg = SolverConfig::default();
        let x = nelder_mead_1d_bounded(|x| (x - 3.0).powi(2), 0.0, -1.0, 1.5, &cfg).unwrap();
        assert!((x - 1.5).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(SolverConfig { max_iter: 0, ..Default::default() }.validate().is_err());
        assert!(SolverConfig { tol_x: 0.0, ..Default::default() }.validate().is_err());
    }
}
