use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smallest admissible `|beta|` for the exponential core; `beta -> 0` is the uniform core.
pub const EXP_BETA_MIN_ABS: f64 = 1e-8;

/// The seven piecewise Pareto families.
///
/// Every family has a Pareto tail `C (x_min / x)^alpha` above `x_min`; they differ in
/// the core on `[0, x_min]`. The `Forced*` variants tie the core shape to the tail
/// exponent (`beta = alpha`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// Constant core.
    Uni,
    /// Core `(x / x_min)^beta`, `beta > -1`.
    Pow,
    ForcedPow,
    /// Core `exp(-beta (x / x_min - 1))`, `beta != 0`.
    Exp,
    ForcedExp,
    /// Core `2 - (x / x_min)^beta`, `beta > 0`.
    Alg,
    ForcedAlg,
}

impl FamilyId {
    pub const ALL: [FamilyId; 7] = [
        FamilyId::Uni,
        FamilyId::Pow,
        FamilyId::ForcedPow,
        FamilyId::Exp,
        FamilyId::ForcedExp,
        FamilyId::Alg,
        FamilyId::ForcedAlg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Uni => "uni",
            FamilyId::Pow => "pow",
            FamilyId::ForcedPow => "forced-pow",
            FamilyId::Exp => "exp",
            FamilyId::ForcedExp => "forced-exp",
            FamilyId::Alg => "alg",
            FamilyId::ForcedAlg => "forced-alg",
        }
    }

    pub fn is_forced(self) -> bool {
        matches!(self, FamilyId::ForcedPow | FamilyId::ForcedExp | FamilyId::ForcedAlg)
    }

    /// Whether `beta` is a free parameter of the family.
    pub fn has_free_beta(self) -> bool {
        matches!(self, FamilyId::Pow | FamilyId::Exp | FamilyId::Alg)
    }

    /// Number of free parameters (`alpha`, `x_min` and possibly `beta`).
    pub fn parameter_count(self) -> usize {
        if self.has_free_beta() {
            3
        } else {
            2
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family {s:?}")))
    }
}

/// A family tag with validated `(alpha, beta, x_min)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    family: FamilyId,
    alpha: f64,
    beta: Option<f64>,
    x_min: f64,
}

impl FamilyParams {
    /// Validates and builds a parameter set.
    ///
    /// `beta` must be `None` for `Uni` (a literal `0` is accepted too) and may be
    /// `None` or equal to `alpha` for the forced families.
    pub fn new(family: FamilyId, alpha: f64, beta: Option<f64>, x_min: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::InvalidParams(format!("alpha must be > 1, got {alpha}")));
        }
        if !(x_min.is_finite() && x_min > 0.0) {
            return Err(Error::InvalidParams(format!("x_min must be > 0, got {x_min}")));
        }
        if let Some(b) = beta {
            if !b.is_finite() {
                return Err(Error::InvalidParams(format!("beta must be finite, got {b}")));
            }
        }
        let beta = match family {
            FamilyId::Uni => match beta {
                None | Some(0.0) => None,
                Some(b) => {
                    return Err(Error::InvalidParams(format!(
                        "the uni family has no beta parameter (got {b})"
                    )))
                }
            },
            FamilyId::ForcedPow | FamilyId::ForcedExp | FamilyId::ForcedAlg => match beta {
                None => Some(alpha),
                Some(b) if b == alpha => Some(alpha),
                Some(b) => {
                    return Err(Error::InvalidParams(format!(
                        "{family} requires beta == alpha (got beta = {b}, alpha = {alpha})"
                    )))
                }
            },
            FamilyId::Pow => {
                let b = require_beta(family, beta)?;
                if b <= -1.0 {
                    return Err(Error::InvalidParams(format!("pow requires beta > -1, got {b}")));
                }
                Some(b)
            }
            FamilyId::Exp => {
                let b = require_beta(family, beta)?;
                if b.abs() < EXP_BETA_MIN_ABS {
                    return Err(Error::InvalidParams(format!(
                        "exp requires |beta| >= {EXP_BETA_MIN_ABS:e}, got {b}"
                    )));
                }
                if b == alpha {
                    return Err(Error::InvalidParams(format!(
                        "exp requires beta != alpha (got {b}); use forced-exp"
                    )));
                }
                Some(b)
            }
            FamilyId::Alg => {
                let b = require_beta(family, beta)?;
                if b <= 0.0 {
                    return Err(Error::InvalidParams(format!("alg requires beta > 0, got {b}")));
                }
                Some(b)
            }
        };
        Ok(Self { family, alpha, beta, x_min })
    }

    pub fn uni(alpha: f64, x_min: f64) -> Result<Self> {
        Self::new(FamilyId::Uni, alpha, None, x_min)
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `None` for `Uni`; equal to `alpha` for the forced families.
    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// The core exponent as a number: `0` for `Uni`.
    pub fn core_beta(&self) -> f64 {
        self.beta.unwrap_or(0.0)
    }
}

fn require_beta(family: FamilyId, beta: Option<f64>) -> Result<f64> {
    beta.ok_or_else(|| Error::InvalidParams(format!("{family} requires a beta parameter")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        assert!("gauss".parse::<FamilyId>().is_err());
    }

    #[test]
    fn validation_bounds() {
        use FamilyId::*;
        assert!(FamilyParams::new(Uni, 1.0, None, 1.0).is_err());
        assert!(FamilyParams::new(Uni, 2.0, None, 0.0).is_err());
        assert!(FamilyParams::new(Uni, 2.0, Some(0.5), 1.0).is_err());
        assert!(FamilyParams::new(Pow, 2.0, Some(-1.0), 1.0).is_err());
        assert!(FamilyParams::new(Pow, 2.0, Some(-0.99), 1.0).is_ok());
        assert!(FamilyParams::new(Pow, 2.0, None, 1.0).is_err());
        assert!(FamilyParams::new(Exp, 2.0, Some(0.0), 1.0).is_err());
        assert!(FamilyParams::new(Exp, 2.0, Some(1e-9), 1.0).is_err());
        assert!(FamilyParams::new(Exp, 2.0, Some(2.0), 1.0).is_err());
        assert!(FamilyParams::new(Exp, 2.0, Some(-3.0), 1.0).is_ok());
        assert!(FamilyParams::new(Alg, 2.0, Some(0.0), 1.0).is_err());
        assert!(FamilyParams::new(Alg, 2.0, Some(-0.5), 1.0).is_err());
        assert!(FamilyParams::new(ForcedExp, 2.0, Some(3.0), 1.0).is_err());
        let p = FamilyParams::new(ForcedAlg, 2.5, None, 1.0).unwrap();
        assert_eq!(p.beta(), Some(2.5));
    }

    #[test]
    fn parameter_counts() {
        assert_eq!(FamilyId::Uni.parameter_count(), 2);
        assert_eq!(FamilyId::ForcedExp.parameter_count(), 2);
        assert_eq!(FamilyId::Alg.parameter_count(), 3);
    }
}
