//! Piecewise Pareto distributions with a finite, non-zero core.
//!
//! Each family has density `C γ(x / x_min)` on `[0, x_min]` and a Pareto tail
//! `C (x_min / x)^α` above it. Supported cores are uniform, power-law, exponential
//! and algebraic, plus the variants that tie the core shape to the tail exponent
//! (`β = α`), which makes the density and its first derivative continuous.
//!
//! ```
//! use ppareto::{distributions, estimators, FamilyId, FamilyParams, SolverConfig, SortedSample};
//!
//! let truth = FamilyParams::new(FamilyId::Pow, 2.0, Some(1.0), 10.0).unwrap();
//! let data = distributions::sample(&truth, 2_000, 7).unwrap();
//! let sample = SortedSample::new(&data).unwrap();
//! let fit = estimators::fit(FamilyId::Pow, &sample, &SolverConfig::default()).unwrap();
//! assert!((fit.params.alpha() - 2.0).abs() < 0.3);
//! ```

pub mod distributions;
pub mod error;
pub mod estimators;
pub mod family;
mod numeric;
pub mod sample;
pub mod santafe;
pub mod solvers;

pub use error::{Error, Result};
pub use estimators::{FitResult, Pinned};
pub use family::{FamilyId, FamilyParams, EXP_BETA_MIN_ABS};
pub use sample::{parse_observations, read_observations, Interval, SortedSample, SplitStats};
pub use santafe::{DegreeSample, SantaFeFit, SantaFeParams};
pub use solvers::SolverConfig;
