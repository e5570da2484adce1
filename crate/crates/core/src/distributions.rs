//! Density, distribution function, quantiles, moments, sampling and
//! log-likelihood of the piecewise Pareto families.
//!
//! Every family has density `C γ(x / x_min)` on `[0, x_min]` and `C (x_min / x)^α`
//! above. Writing `u = x / x_min` and `c = ∫_0^1 γ(u) du`, normalization gives
//! `C x_min = 1 / (c + 1/(α - 1))`; the moments and the cdf follow from the
//! corresponding core integrals, which are closed-form for every core.
//!
//! Variates are drawn by inverse transform from a `Xoshiro256PlusPlus` generator
//! seeded with [`rand::SeedableRng::seed_from_u64`]; uniforms are the standard
//! 53-bit `[0, 1)` draws.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::family::{FamilyId, FamilyParams};
use crate::numeric::{compensated_sum, ln_phi, log_add_exp};
use crate::sample::{SortedSample, SplitStats};
use crate::solvers::{newton, SolverConfig};

/// Core shape on `u = x / x_min ∈ [0, 1]`.
#[derive(Debug, Clone, Copy)]
enum Core {
    Uniform,
    Power(f64),
    Exponential(f64),
    Algebraic(f64),
}

impl Core {
    fn of(p: &FamilyParams) -> Self {
        let b = p.core_beta();
        match p.family() {
            FamilyId::Uni => Core::Uniform,
            FamilyId::Pow | FamilyId::ForcedPow => Core::Power(b),
            FamilyId::Exp | FamilyId::ForcedExp => Core::Exponential(b),
            FamilyId::Alg | FamilyId::ForcedAlg => Core::Algebraic(b),
        }
    }

    /// `ln ∫_0^1 γ(u) du`
    fn ln_mass(self) -> f64 {
        match self {
            Core::Uniform => 0.0,
            Core::Power(b) => -(b + 1.0).ln(),
            Core::Exponential(b) => ln_phi(1, b),
            Core::Algebraic(b) => ((2.0 * b + 1.0) / (b + 1.0)).ln(),
        }
    }

    /// `ln ∫_0^1 u γ(u) du`
    fn ln_first(self) -> f64 {
        match self {
            Core::Uniform => 0.5f64.ln(),
            Core::Power(b) => -(b + 2.0).ln(),
            Core::Exponential(b) => ln_phi(2, b),
            Core::Algebraic(b) => ((b + 1.0) / (b + 2.0)).ln(),
        }
    }

    /// `ln ∫_0^1 u^2 γ(u) du`
    fn ln_second(self) -> f64 {
        match self {
            Core::Uniform => (1.0f64 / 3.0).ln(),
            Core::Power(b) => -(b + 3.0).ln(),
            Core::Exponential(b) => 2f64.ln() + ln_phi(3, b),
            Core::Algebraic(b) => ((2.0 * b + 3.0) / (3.0 * (b + 3.0))).ln(),
        }
    }

    /// `ln γ(u)` for `0 <= u <= 1`.
    fn ln_density(self, u: f64) -> f64 {
        match self {
            Core::Uniform => 0.0,
            Core::Power(b) => {
                if b == 0.0 {
                    0.0
                } else {
                    b * u.ln()
                }
            }
            Core::Exponential(b) => -b * (u - 1.0),
            Core::Algebraic(b) => (2.0 - u.powf(b)).ln(),
        }
    }

    /// `∫_0^u γ(t) dt` for `0 <= u <= 1`.
    fn cumulative(self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        match self {
            Core::Uniform => u,
            Core::Power(b) => u.powf(b + 1.0) / (b + 1.0),
            // e^b (1 - e^{-bu}) / b = u e^{b(1-u)} φ1(bu)
            Core::Exponential(b) => (u.ln() + b * (1.0 - u) + ln_phi(1, b * u)).exp(),
            Core::Algebraic(b) => 2.0 * u - u.powf(b + 1.0) / (b + 1.0),
        }
    }
}

/// Quantities shared by every evaluation for one parameter set.
struct Shape {
    core: Core,
    alpha: f64,
    x_min: f64,
    /// `ln(C x_min)`
    ln_c_scaled: f64,
}

impl Shape {
    fn new(p: &FamilyParams) -> Self {
        let core = Core::of(p);
        let alpha = p.alpha();
        let ln_c_scaled = -log_add_exp(core.ln_mass(), -(alpha - 1.0).ln());
        Self { core, alpha, x_min: p.x_min(), ln_c_scaled }
    }

    fn ln_c(&self) -> f64 {
        self.ln_c_scaled - self.x_min.ln()
    }

    /// Probability mass above `x_min`: `C x_min / (α - 1)`.
    fn tail_weight(&self) -> f64 {
        (self.ln_c_scaled - (self.alpha - 1.0).ln()).exp()
    }
}

/// Normalization constant `C`.
pub fn normalization(p: &FamilyParams) -> f64 {
    Shape::new(p).ln_c().exp()
}

/// Natural log of the density at `x`.
pub fn ln_pdf(p: &FamilyParams, x: f64) -> Result<f64> {
    let s = Shape::new(p);
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("density undefined for x = {x} (support is x >= 0)")));
    }
    if x > s.x_min {
        return Ok(s.ln_c() - s.alpha * (x / s.x_min).ln());
    }
    if x == 0.0 {
        if let Core::Power(b) = s.core {
            if b < 0.0 {
                return Err(Error::Domain(format!(
                    "pow core with beta = {b} < 0 is singular at x = 0"
                )));
            }
        }
    }
    Ok(s.ln_c() + s.core.ln_density(x / s.x_min))
}

/// Density at `x >= 0`.
pub fn pdf(p: &FamilyParams, x: f64) -> Result<f64> {
    ln_pdf(p, x).map(f64::exp)
}

/// Distribution function at `x >= 0`.
pub fn cdf(p: &FamilyParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("cdf undefined for x = {x} (support is x >= 0)")));
    }
    let s = Shape::new(p);
    if x > s.x_min {
        return Ok(1.0 - s.tail_weight() * (s.x_min / x).powf(s.alpha - 1.0));
    }
    let g = s.core.cumulative(x / s.x_min);
    Ok((s.ln_c_scaled.exp() * g).min(1.0))
}

/// Closed-form probability mass above `x` for `x >= x_min`.
pub fn tail_mass(p: &FamilyParams, x: f64) -> Result<f64> {
    let s = Shape::new(p);
    if !(x >= s.x_min) {
        return Err(Error::Domain(format!("tail mass requires x >= x_min, got {x}")));
    }
    Ok(s.tail_weight() * (s.x_min / x).powf(s.alpha - 1.0))
}

/// Quantile function for `0 <= q < 1`.
pub fn icdf(p: &FamilyParams, q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::Domain(format!("quantile requires 0 <= q < 1, got {q}")));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    let s = Shape::new(p);
    let w = s.tail_weight();
    if q > 1.0 - w {
        let ln_ratio = w.ln() - (-q).ln_1p();
        return Ok(s.x_min * (ln_ratio / (s.alpha - 1.0)).exp());
    }
    // core branch: solve ∫_0^u γ = q / (C x_min)
    let ln_g = q.ln() - s.ln_c_scaled;
    let g = ln_g.exp();
    let u = match s.core {
        Core::Uniform => g,
        Core::Power(b) => (g * (b + 1.0)).powf(1.0 / (b + 1.0)),
        Core::Exponential(b) => {
            if b > 0.0 {
                -(-(ln_g + b.ln() - b).exp()).ln_1p() / b
            } else {
                let a = -b;
                log_add_exp(0.0, ln_g + a.ln() + a) / a
            }
        }
        Core::Algebraic(b) => algebraic_core_quantile(b, g),
    };
    Ok(s.x_min * u.clamp(0.0, 1.0))
}

/// Root of `2u - u^{b+1}/(b+1) = g` on `[0, 1]`; the left side is increasing with slope `2 - u^b >= 1`.
fn algebraic_core_quantile(b: f64, g: f64) -> f64 {
    let top = (2.0 * b + 1.0) / (b + 1.0);
    if g >= top {
        return 1.0;
    }
    let cfg = SolverConfig { tol_x: 1e-15, tol_f: 1e-16, max_iter: 200, ..SolverConfig::default() };
    let f = |u: f64| 2.0 * u - u.powf(b + 1.0) / (b + 1.0) - g;
    let df = |u: f64| 2.0 - u.powf(b);
    // linearization of the cumulative core near zero
    let u0 = 0.5 * g;
    newton(f, df, u0, (0.0, 1.0), &cfg).unwrap_or_else(|_| {
        // the bracket always holds a sign change; fall back to plain bisection
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// `E[X]`, finite for `α > 2`.
pub fn mean(p: &FamilyParams) -> Result<f64> {
    moment(p, 1)
}

/// `E[X^2]`, finite for `α > 3`.
pub fn second_moment(p: &FamilyParams) -> Result<f64> {
    moment(p, 2)
}

fn moment(p: &FamilyParams, order: u32) -> Result<f64> {
    let s = Shape::new(p);
    let k = f64::from(order);
    if s.alpha <= k + 1.0 {
        return Err(Error::MomentUndefined { order, alpha: s.alpha });
    }
    let ln_core = if order == 1 { s.core.ln_first() } else { s.core.ln_second() };
    let ln_integral = log_add_exp(ln_core, -(s.alpha - k - 1.0).ln());
    Ok(s.x_min.powi(order as i32) * (s.ln_c_scaled + ln_integral).exp())
}

/// `count` variates by inverse transform, reproducible for a given `seed`.
pub fn sample(p: &FamilyParams, count: usize, seed: u64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidParams("sample count must be at least 1".into()));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..count).map(|_| icdf(p, rng.random::<f64>())).collect()
}

/// `ln L` of the whole sample, with the split taken at `params.x_min()`.
pub fn log_likelihood(p: &FamilyParams, sample: &SortedSample) -> Result<f64> {
    log_likelihood_partition(p, sample, sample.count_at_or_below(p.x_min()))
}

/// `ln L` with the first `n_s` sorted observations assigned to the core.
///
/// With `n_s` consistent with `x_min` this is the ordinary log-likelihood; with a
/// fixed `n_s` it is the smooth continuation used inside one scan interval.
pub fn log_likelihood_partition(p: &FamilyParams, sample: &SortedSample, n_s: usize) -> Result<f64> {
    let stats = sample.stats_for_core_count(n_s);
    let core_term = match Core::of(p) {
        Core::Algebraic(b) => {
            let xm = p.x_min();
            compensated_sum(sample.core_values(n_s).iter().map(|&x| (2.0 - (x / xm).powf(b)).ln()))
        }
        other => stats_core_term(other, &stats, p.x_min()),
    };
    Ok(stats_log_likelihood(p, &stats, core_term))
}

/// `ln L` from split statistics alone (not available for the algebraic cores).
pub fn log_likelihood_from_stats(p: &FamilyParams, stats: &SplitStats) -> Result<f64> {
    match Core::of(p) {
        Core::Algebraic(_) => Err(Error::RawDataRequired),
        core => Ok(stats_log_likelihood(p, stats, stats_core_term(core, stats, p.x_min()))),
    }
}

fn stats_core_term(core: Core, stats: &SplitStats, x_min: f64) -> f64 {
    match core {
        Core::Uniform => 0.0,
        Core::Power(b) => -b * stats.core_log_deficit(x_min),
        Core::Exponential(b) => -b * stats.core_linear_excess(x_min),
        Core::Algebraic(_) => unreachable!("algebraic core needs raw data"),
    }
}

fn stats_log_likelihood(p: &FamilyParams, stats: &SplitStats, core_term: f64) -> f64 {
    let s = Shape::new(p);
    stats.n as f64 * s.ln_c() - s.alpha * stats.tail_log_excess(s.x_min) + core_term
}
