//! Asymptotic contact-number distribution of the thresholded Gaussian contact
//! model and its closed-form maximum-likelihood estimators.
//!
//! Each pair `(i, j)` has propensity `X_ij = √ρ (Z_i + Z_j) + √(1-2ρ) Y_ij` with
//! standard normal `Z`, `Y`, and a contact exists when `X_ij` exceeds `t`. For a
//! system of `N` individuals the number of contacts `k > 0` has, asymptotically,
//!
//! `p_k = 1/(N-1) √((1-ρ)/ρ) exp[-(1-2ρ)/(2ρ) y_k² + t y_k √(1-ρ)/ρ - t²/(2ρ)]`
//!
//! with `y_k = Φ⁻¹(1 - k/(N-1))`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Smallest `ρ` accepted by [`pk`] and [`loglik_santafe`]; both diverge as `ρ → 0`.
pub const RHO_MIN: f64 = 1e-8;
/// `ρ̂` is clipped to `[0, 1/2 - RHO_MARGIN]`.
pub const RHO_MARGIN: f64 = 1e-9;

// AS 241 (PPND16) coefficients, highest degree first.
const CENTRAL_NUM: [f64; 8] = [
    2509.080_928_730_122_7,
    33430.575_583_588_128,
    67265.770_927_008_7,
    45921.953_931_549_87,
    13731.693_765_509_461,
    1971.590_950_306_551_3,
    133.141_667_891_784_38,
    3.387_132_872_796_366_5,
];
const CENTRAL_DEN: [f64; 8] = [
    5226.495_278_852_545,
    28729.085_735_721_943,
    39307.895_800_092_71,
    21213.794_301_586_597,
    5394.196_021_424_751,
    687.187_007_492_057_9,
    42.313_330_701_600_91,
    1.0,
];
const NEAR_NUM: [f64; 8] = [
    7.745_450_142_783_414e-4,
    0.022_723_844_989_269_184,
    0.241_780_725_177_450_6,
    1.270_458_252_452_368_4,
    3.647_848_324_763_204_5,
    5.769_497_221_460_691,
    4.630_337_846_156_546,
    1.423_437_110_749_683_5,
];
const NEAR_DEN: [f64; 8] = [
    1.050_750_071_644_416_9e-9,
    5.475_938_084_995_345e-4,
    0.015_198_666_563_616_457,
    0.148_103_976_427_480_08,
    0.689_767_334_985_1,
    1.676_384_830_183_803_8,
    2.053_191_626_637_759,
    1.0,
];
const FAR_NUM: [f64; 8] = [
    2.010_334_399_292_288_1e-7,
    2.711_555_568_743_487_6e-5,
    0.001_242_660_947_388_078_4,
    0.026_532_189_526_576_124,
    0.296_560_571_828_504_9,
    1.784_826_539_917_291_3,
    5.463_784_911_164_114,
    6.657_904_643_501_103,
];
const FAR_DEN: [f64; 8] = [
    2.044_263_103_389_939_7e-15,
    1.421_511_758_316_446e-7,
    1.846_318_317_510_054_8e-5,
    7.868_691_311_456_133e-4,
    0.014_875_361_290_850_615,
    0.136_929_880_922_735_8,
    0.599_832_206_555_888,
    1.0,
];

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &k| acc * x + k)
}

/// Standard normal quantile (Wichura's AS 241, relative accuracy about `1e-16`).
pub fn inv_norm_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("normal quantile requires 0 < p < 1, got {p}")));
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return Ok(q * horner(&CENTRAL_NUM, r) / horner(&CENTRAL_DEN, r));
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let x = if r <= 5.0 {
        let r = r - 1.6;
        horner(&NEAR_NUM, r) / horner(&NEAR_DEN, r)
    } else {
        let r = r - 5.0;
        horner(&FAR_NUM, r) / horner(&FAR_DEN, r)
    };
    Ok(if q < 0.0 { -x } else { x })
}

/// Model parameters: threshold `t`, mixing weight `ρ ∈ [0, 1/2)` and system size `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SantaFeParams {
    pub t: f64,
    pub rho: f64,
    pub n_system: u64,
}

impl SantaFeParams {
    pub fn new(t: f64, rho: f64, n_system: u64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidParams(format!("t must be finite, got {t}")));
        }
        if !(0.0..0.5).contains(&rho) {
            return Err(Error::InvalidParams(format!("rho must satisfy 0 <= rho < 1/2, got {rho}")));
        }
        if n_system < 2 {
            return Err(Error::InvalidParams(format!("system size N must be >= 2, got {n_system}")));
        }
        Ok(Self { t, rho, n_system })
    }

    fn require_rho(&self) -> Result<()> {
        if self.rho < RHO_MIN {
            Err(Error::InvalidParams(format!(
                "rho = {} is below {RHO_MIN:e}; the contact distribution diverges as rho -> 0",
                self.rho
            )))
        } else {
            Ok(())
        }
    }
}

/// `y_k = Φ⁻¹(1 - k/(N-1))` for `1 <= k <= N - 2`.
pub fn latent_score(k: u64, n_system: u64) -> Result<f64> {
    if k == 0 || n_system < 3 || k > n_system - 2 {
        return Err(Error::Domain(format!(
            "contact number {k} is outside 1..=N-2 (N = {n_system}); the asymptotic form only holds for k > 0 and k < N - 1"
        )));
    }
    inv_norm_cdf(1.0 - k as f64 / (n_system - 1) as f64)
}

/// Observed contact numbers with the first two moments of their latent scores.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSample {
    degrees: Vec<u64>,
    n_system: u64,
    mean_y: f64,
    mean_y2: f64,
}

impl DegreeSample {
    /// Every degree must lie in `1..=N-2`; the offending entry is named otherwise.
    pub fn new(degrees: &[u64], n_system: u64) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::DegenerateSample("no contact numbers given".into()));
        }
        let mut s1 = CompensatedSum::default();
        let mut s2 = CompensatedSum::default();
        for (i, &k) in degrees.iter().enumerate() {
            let y = latent_score(k, n_system)
                .map_err(|e| Error::Domain(format!("entry #{} ({k}): {e}", i + 1)))?;
            s1.add(y);
            s2.add(y * y);
        }
        let n = degrees.len() as f64;
        Ok(Self { degrees: degrees.to_vec(), n_system, mean_y: s1.value() / n, mean_y2: s2.value() / n })
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn n_system(&self) -> u64 {
        self.n_system
    }

    /// `<y_k>`
    pub fn mean_y(&self) -> f64 {
        self.mean_y
    }

    /// `<y_k²>`
    pub fn mean_y2(&self) -> f64 {
        self.mean_y2
    }

    /// Population variance `<y²> - <y>²`, never negative.
    pub fn variance_y(&self) -> f64 {
        (self.mean_y2 - self.mean_y * self.mean_y).max(0.0)
    }
}

fn ln_pk_at(params: &SantaFeParams, y: f64) -> f64 {
    let (t, r) = (params.t, params.rho);
    -((params.n_system - 1) as f64).ln() + 0.5 * ((1.0 - r).ln() - r.ln()) - (1.0 - 2.0 * r) / (2.0 * r) * y * y
        + t * y * (1.0 - r).sqrt() / r
        - t * t / (2.0 * r)
}

/// `p_k` for `1 <= k <= N - 2`. Not normalized over `k`.
pub fn pk(params: &SantaFeParams, k: u64) -> Result<f64> {
    params.require_rho()?;
    Ok(ln_pk_at(params, latent_score(k, params.n_system)?).exp())
}

/// `ln L = Σ_i ln p_{k_i}` written through `<y_k>` and `<y_k²>`.
///
/// The degrees must have been built with the same `N` as `params`.
pub fn loglik_santafe(params: &SantaFeParams, degrees: &DegreeSample) -> Result<f64> {
    params.require_rho()?;
    if params.n_system != degrees.n_system {
        return Err(Error::InvalidParams(format!(
            "degrees were mapped with N = {}, parameters have N = {}",
            degrees.n_system, params.n_system
        )));
    }
    let n = degrees.len() as f64;
    let (t, r) = (params.t, params.rho);
    Ok(-n * ((params.n_system - 1) as f64).ln() + n * t * degrees.mean_y * (1.0 - r).sqrt() / r
        - n * degrees.mean_y2 * (1.0 - 2.0 * r) / (2.0 * r)
        + 0.5 * n * ((1.0 - r).ln() - r.ln())
        - n * t * t / (2.0 * r))
}

/// One sign choice for `t̂ = ±<y_k> √(1 - ρ̂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignCandidate {
    pub sign: f64,
    pub t: f64,
    /// `None` when `ρ̂` is below [`RHO_MIN`] and the likelihood is undefined.
    pub loglik: Option<f64>,
}

/// Closed-form estimate with both sign candidates for `t̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct SantaFeFit {
    pub params: SantaFeParams,
    pub loglik: Option<f64>,
    pub candidates: [SignCandidate; 2],
    /// Whether the winner is `t̂ = +<y_k> √(1 - ρ̂)`.
    pub positive_sign: bool,
    pub rho_clipped: bool,
}

/// `ρ̂ = v / (v + 1)` with `v` the variance of `y_k`, then the better of `t̂ = ±<y_k> √(1-ρ̂)`.
///
/// Ties (including an undefined likelihood at `ρ̂ = 0`) go to the positive sign.
pub fn fit_santafe(degrees: &DegreeSample) -> Result<SantaFeFit> {
    if degrees.len() < 2 {
        return Err(Error::DegenerateSample(format!("need at least two contact numbers, got {}", degrees.len())));
    }
    let v = degrees.variance_y();
    let raw = v / (v + 1.0);
    let cap = 0.5 - RHO_MARGIN;
    let rho = raw.clamp(0.0, cap);
    let magnitude = degrees.mean_y * (1.0 - rho).sqrt();
    let cand = |sign: f64| -> Result<SignCandidate> {
        let params = SantaFeParams::new(sign * magnitude, rho, degrees.n_system)?;
        let loglik = if rho < RHO_MIN { None } else { Some(loglik_santafe(&params, degrees)?) };
        Ok(SignCandidate { sign, t: sign * magnitude, loglik })
    };
    let candidates = [cand(1.0)?, cand(-1.0)?];
    let positive_sign = match (candidates[0].loglik, candidates[1].loglik) {
        (Some(p), Some(m)) => p >= m,
        _ => true,
    };
    let win = if positive_sign { candidates[0] } else { candidates[1] };
    Ok(SantaFeFit {
        params: SantaFeParams::new(win.t, rho, degrees.n_system)?,
        loglik: win.loglik,
        candidates,
        positive_sign,
        rho_clipped: raw > cap,
    })
}

/// Draws contact numbers from `p_k` renormalized over `1..=N-2`.
pub fn sample_degrees(params: &SantaFeParams, count: usize, seed: u64) -> Result<Vec<u64>> {
    params.require_rho()?;
    if params.n_system < 3 {
        return Err(Error::InvalidParams("N must be at least 3 to have admissible contact numbers".into()));
    }
    let ln_w: Vec<f64> = (1..=params.n_system - 2)
        .map(|k| latent_score(k, params.n_system).map(|y| ln_pk_at(params, y)))
        .collect::<Result<_>>()?;
    let top = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let dist = WeightedIndex::new(ln_w.iter().map(|l| (l - top).exp()))
        .map_err(|e| Error::InvalidParams(format!("cannot sample contact numbers: {e}")))?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    Ok((0..count).map(|_| dist.sample(&mut rng) as u64 + 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_known_values() {
        assert_eq!(inv_norm_cdf(0.5).unwrap(), 0.0);
        assert!((inv_norm_cdf(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-12);
        assert!((inv_norm_cdf(1e-10).unwrap() + 6.361_340_902_404_056).abs() < 1e-9);
        assert!(inv_norm_cdf(0.0).is_err());
        assert!(inv_norm_cdf(1.0).is_err());
    }

    #[test]
    fn degree_range_is_enforced() {
        assert!(matches!(DegreeSample::new(&[3, 0, 5], 100), Err(Error::Domain(m)) if m.contains("#2")));
        assert!(DegreeSample::new(&[99], 100).is_err());
        assert!(DegreeSample::new(&[98], 100).is_ok());
    }

    #[test]
    fn single_degree_loglik_is_ln_pk() {
        let p = SantaFeParams::new(1.2, 0.2, 1000).unwrap();
        let d = DegreeSample::new(&[17], 1000).unwrap();
        let ll = loglik_santafe(&p, &d).unwrap();
        assert!((ll - pk(&p, 17).unwrap().ln()).abs() < 1e-12);
    }

    #[test]
    fn constant_degrees_give_zero_rho() {
        let d = DegreeSample::new(&[5, 5, 5, 5], 1000).unwrap();
        let f = fit_santafe(&d).unwrap();
        assert_eq!(f.params.rho, 0.0);
        assert!(f.loglik.is_none());
        assert!(f.positive_sign);
    }

    #[test]
    fn rho_guard() {
        let p = SantaFeParams::new(1.0, 1e-9, 100).unwrap();
        assert!(matches!(pk(&p, 3), Err(Error::InvalidParams(_))));
        assert!(SantaFeParams::new(1.0, 0.5, 100).is_err());
    }

    #[test]
    fn positive_sign_wins_for_positive_mean() {
        let d = DegreeSample::new(&[1, 2, 3, 8, 40], 1000).unwrap();
        let f = fit_santafe(&d).unwrap();
        assert!(d.mean_y() > 0.0);
        assert!(f.positive_sign);
        assert!(f.candidates[0].loglik.unwrap() > f.candidates[1].loglik.unwrap());
    }

    #[test]
    fn sampled_degrees_are_in_range_and_reproducible() {
        let p = SantaFeParams::new(1.0, 0.2, 500).unwrap();
        let a = sample_degrees(&p, 200, 1).unwrap();
        assert_eq!(a, sample_degrees(&p, 200, 1).unwrap());
        assert!(a.iter().all(|&k| (1..=498).contains(&k)));
    }
}
