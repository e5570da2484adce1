//! Report documents and the pure computations behind each command.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use ppareto::estimators::{fit_pinned, FitResult};
use ppareto::santafe::{fit_santafe, SantaFeFit};
use ppareto::{distributions, DegreeSample, FamilyId, FamilyParams, Pinned, SolverConfig, SortedSample};

use crate::args::Spacing;
use crate::CliError;

/// A float written with 17 significant digits so it round-trips exactly; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Serialize)]
pub struct FamilyFit {
    pub family: String,
    pub alpha: Num,
    pub beta: Option<Num>,
    pub xmin: Num,
    pub loglik: Num,
    pub aic: Num,
    pub bic: Num,
    pub k_params: usize,
    pub at_boundary: bool,
    pub interval_index: usize,
    pub xmin_pinned: bool,
    pub beta_pinned: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct FamilyFailure {
    pub family: String,
    pub error: String,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub n: usize,
    pub dropped_non_finite: usize,
    /// One entry per fitted family, in family order.
    pub results: Vec<FamilyFit>,
    pub failures: Vec<FamilyFailure>,
    /// Family names by ascending AIC.
    pub ranking: Vec<String>,
    pub best_family: Option<String>,
}

/// `2k - 2 ln L`.
pub fn aic(k: usize, loglik: f64) -> f64 {
    2.0 * k as f64 - 2.0 * loglik
}

/// `k ln n - 2 ln L`.
pub fn bic(k: usize, n: usize, loglik: f64) -> f64 {
    k as f64 * (n as f64).ln() - 2.0 * loglik
}

fn family_fit(r: &FitResult, pins: Pinned, beta_pinned: bool) -> FamilyFit {
    let family = r.params.family();
    let k = family.parameter_count() - usize::from(pins.x_min.is_some()) - usize::from(beta_pinned);
    FamilyFit {
        family: family.name().to_string(),
        alpha: Num(r.params.alpha()),
        beta: r.params.beta().map(Num),
        xmin: Num(r.params.x_min()),
        loglik: Num(r.loglik),
        aic: Num(aic(k, r.loglik)),
        bic: Num(bic(k, r.n, r.loglik)),
        k_params: k,
        at_boundary: r.at_boundary,
        interval_index: r.interval_index,
        xmin_pinned: pins.x_min.is_some(),
        beta_pinned,
        notes: r.branch_notes.clone(),
    }
}

/// Fits every requested family; a family that cannot be fitted is listed under
/// `failures`. Fails only when no family succeeds.
pub fn fit_report(
    sample: &SortedSample,
    families: &[FamilyId],
    pins: Pinned,
    cfg: &SolverConfig,
) -> Result<FitReport, CliError> {
    if pins.beta.is_some() && !families.iter().any(|f| f.has_free_beta()) {
        return Err(CliError::Usage("--beta applies only to pow, exp and alg".into()));
    }
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for &f in families {
        let own = Pinned { x_min: pins.x_min, beta: if f.has_free_beta() { pins.beta } else { None } };
        match fit_pinned(f, sample, own, cfg) {
            Ok(r) => {
                let mut entry = family_fit(&r, own, own.beta.is_some());
                if pins.beta.is_some() && own.beta.is_none() {
                    entry.notes.push("beta pin not applicable to this family".into());
                }
                results.push(entry);
            }
            Err(e @ ppareto::Error::InvalidParams(_)) if families.len() == 1 => return Err(e.into()),
            Err(e) => failures.push(FamilyFailure { family: f.name().to_string(), error: e.to_string() }),
        }
    }
    if results.is_empty() {
        let why: Vec<String> = failures.iter().map(|f| format!("{}: {}", f.family, f.error)).collect();
        return Err(CliError::NoValidFit(format!("no family could be fitted ({})", why.join("; "))));
    }
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&a, &b| results[a].aic.0.total_cmp(&results[b].aic.0).then(a.cmp(&b)));
    let ranking: Vec<String> = order.iter().map(|&i| results[i].family.clone()).collect();
    Ok(FitReport {
        n: sample.len(),
        dropped_non_finite: sample.dropped_non_finite(),
        best_family: ranking.first().cloned(),
        ranking,
        results,
        failures,
    })
}

/// Rows `(x, pdf, cdf)`; `pdf` is infinite where the density is singular.
pub fn tabulate(p: &FamilyParams, xmax: f64, points: usize, spacing: Spacing) -> Result<Vec<[f64; 3]>, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!("--points must be at least 2, got {points}")));
    }
    let lo = match spacing {
        Spacing::Log => p.x_min() * 1e-3,
        Spacing::Linear => 0.0,
    };
    if !(xmax.is_finite() && xmax > lo) {
        return Err(CliError::Usage(format!("--xmax must exceed {lo}, got {xmax}")));
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let t = i as f64 / last;
            let x = match spacing {
                Spacing::Log => lo * (xmax / lo).powf(t),
                Spacing::Linear => xmax * t,
            };
            let x = if i == points - 1 { xmax } else { x };
            let pdf = distributions::pdf(p, x).unwrap_or(f64::INFINITY);
            Ok([x, pdf, distributions::cdf(p, x)?])
        })
        .collect()
}

/// One logarithmic bin `[10^(k/B), 10^((k+1)/B))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub density: f64,
}

impl Bin {
    /// Geometric center.
    pub fn center(&self) -> f64 {
        (self.lower * self.upper).sqrt()
    }
}

/// Log-binned density over every bin from the smallest to the largest value.
pub fn histogram(values: &[f64], bins_per_decade: u32) -> Result<Vec<Bin>, CliError> {
    if bins_per_decade == 0 {
        return Err(CliError::Usage("--bins-per-decade must be at least 1".into()));
    }
    if values.is_empty() {
        return Err(CliError::Data("no observations".into()));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(CliError::Data(format!("log binning needs positive finite values, got {v}")));
    }
    let b = f64::from(bins_per_decade);
    let edge = |k: i64| 10f64.powf(k as f64 / b);
    let index = |x: f64| {
        let mut k = (x.log10() * b).floor() as i64;
        while edge(k) > x {
            k -= 1;
        }
        while edge(k + 1) <= x {
            k += 1;
        }
        k
    };
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    let (k0, k1) = (index(lo), index(hi));
    let mut counts = vec![0usize; (k1 - k0 + 1) as usize];
    for &v in values {
        counts[(index(v) - k0) as usize] += 1;
    }
    let n = values.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            let k = k0 + i as i64;
            let (lower, upper) = (edge(k), edge(k + 1));
            Bin { lower, upper, count, density: count as f64 / (n * (upper - lower)) }
        })
        .collect())
}

#[derive(Debug, Serialize)]
pub struct SignReport {
    pub sign: i8,
    pub t: Num,
    pub loglik: Option<Num>,
}

#[derive(Debug, Serialize)]
pub struct SantaFeReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub n_system: u64,
    pub t_hat: Num,
    pub rho_hat: Num,
    pub loglik: Option<Num>,
    pub rho_clipped: bool,
    pub candidates: [SignReport; 2],
    pub sign_note: String,
}

pub fn santafe_report(degrees: &DegreeSample) -> Result<SantaFeReport, CliError> {
    let fit: SantaFeFit = fit_santafe(degrees)?;
    let cand = |i: usize| SignReport {
        sign: if fit.candidates[i].sign > 0.0 { 1 } else { -1 },
        t: Num(fit.candidates[i].t),
        loglik: fit.candidates[i].loglik.map(Num),
    };
    let sign_note = match (fit.loglik, fit.positive_sign) {
        (None, _) => "rho_hat is zero, so the likelihood is undefined; the printed sign t = +<y_k> sqrt(1 - rho) is reported".into(),
        (Some(_), true) => "t = +<y_k> sqrt(1 - rho) (the printed sign) has the higher log-likelihood".into(),
        (Some(_), false) => "t = -<y_k> sqrt(1 - rho) has the higher log-likelihood; the printed sign loses".into(),
    };
    Ok(SantaFeReport {
        n: degrees.len(),
        n_system: degrees.n_system(),
        t_hat: Num(fit.params.t),
        rho_hat: Num(fit.params.rho),
        loglik: fit.loglik.map(Num),
        rho_clipped: fit.rho_clipped,
        candidates: [cand(0), cand(1)],
        sign_note,
    })
}
