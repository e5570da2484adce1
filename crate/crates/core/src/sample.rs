//! Validated observations and the split statistics every estimator consumes.
//!
//! A [`SortedSample`] keeps the observations in ascending order together with
//! compensated prefix sums of `x` and `ln x` (and a suffix sum of `ln x`), so that
//! the statistics of the split `S = {x <= x_min}`, `Λ = {x > x_min}` are available
//! in `O(log n)` for any threshold.

use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Ascending, strictly positive observations with prefix sums.
#[derive(Debug, Clone)]
pub struct SortedSample {
    values: Vec<f64>,
    uniques: Vec<f64>,
    /// `unique_end[j]` = number of observations `<= uniques[j]`.
    unique_end: Vec<usize>,
    /// `prefix_ln[k] = sum_{i<k} ln values[i]`, length `n + 1`.
    prefix_ln: Vec<f64>,
    /// `suffix_ln[k] = sum_{i>=k} ln values[i]`, length `n + 1`.
    suffix_ln: Vec<f64>,
    /// `prefix_x[k] = sum_{i<k} values[i]`, length `n + 1`.
    prefix_x: Vec<f64>,
    dropped_non_finite: usize,
}

/// Sufficient statistics of the split at a threshold `x_min`.
///
/// Means over an empty set are reported as `0.0`; callers check `n_s` / `n_l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitStats {
    pub n: usize,
    pub n_l: usize,
    pub n_s: usize,
    /// `<ln x>` over `Λ = {x > x_min}`.
    pub mean_ln_l: f64,
    /// `<ln x>` over `S = {x <= x_min}`.
    pub mean_ln_s: f64,
    /// `<x>` over `S`.
    pub mean_x_s: f64,
}

impl SplitStats {
    /// `n_Λ <ln(x / x_min)>_Λ`, the tail log-excess. Positive whenever `n_l > 0`.
    pub fn tail_log_excess(&self, x_min: f64) -> f64 {
        if self.n_l == 0 {
            return 0.0;
        }
        self.n_l as f64 * (self.mean_ln_l - x_min.ln())
    }

    /// `n_S <ln(x_min / x)>_S`, non-negative when `x_min` is at or above every core value.
    pub fn core_log_deficit(&self, x_min: f64) -> f64 {
        if self.n_s == 0 {
            return 0.0;
        }
        self.n_s as f64 * (x_min.ln() - self.mean_ln_s)
    }

    /// `n_S (<x>_S / x_min - 1)`, non-positive for a consistent split.
    pub fn core_linear_excess(&self, x_min: f64) -> f64 {
        if self.n_s == 0 {
            return 0.0;
        }
        self.n_s as f64 * (self.mean_x_s / x_min - 1.0)
    }
}

/// One interval `[lower, upper)` between consecutive unique values, with the
/// split statistics that hold throughout it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    /// Zero-based position of `lower` among the unique values.
    pub index: usize,
    pub lower: f64,
    pub upper: f64,
    pub stats: SplitStats,
}

impl SortedSample {
    /// Builds a sample from raw observations.
    ///
    /// Non-finite entries are dropped (and counted); any value `<= 0` is an error.
    /// At least two usable observations with two distinct values are required.
    pub fn new(raw: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(raw.len());
        let mut dropped = 0;
        for (index, &v) in raw.iter().enumerate() {
            if !v.is_finite() {
                dropped += 1;
                continue;
            }
            if v <= 0.0 {
                return Err(Error::NonPositiveValue { index, value: v });
            }
            values.push(v);
        }
        if values.len() < 2 {
            return Err(Error::EmptyInput { usable: values.len() });
        }
        values.sort_by(f64::total_cmp);

        let n = values.len();
        let mut uniques = Vec::new();
        let mut unique_end = Vec::new();
        for (i, &v) in values.iter().enumerate() {
            if uniques.last() != Some(&v) {
                uniques.push(v);
                unique_end.push(i + 1);
            } else {
                *unique_end.last_mut().expect("non-empty") = i + 1;
            }
        }
        if uniques.len() < 2 {
            return Err(Error::EmptyInput { usable: values.len() });
        }

        let mut prefix_ln = Vec::with_capacity(n + 1);
        let mut prefix_x = Vec::with_capacity(n + 1);
        let (mut acc_ln, mut acc_x) = (CompensatedSum::default(), CompensatedSum::default());
        prefix_ln.push(0.0);
        prefix_x.push(0.0);
        for &v in &values {
            acc_ln.add(v.ln());
            acc_x.add(v);
            prefix_ln.push(acc_ln.value());
            prefix_x.push(acc_x.value());
        }
        let mut suffix_ln = vec![0.0; n + 1];
        let mut acc = CompensatedSum::default();
        for k in (0..n).rev() {
            acc.add(values[k].ln());
            suffix_ln[k] = acc.value();
        }

        Ok(Self {
            values,
            uniques,
            unique_end,
            prefix_ln,
            suffix_ln,
            prefix_x,
            dropped_non_finite: dropped,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn uniques(&self) -> &[f64] {
        &self.uniques
    }

    pub fn prefix_ln(&self) -> &[f64] {
        &self.prefix_ln
    }

    pub fn prefix_x(&self) -> &[f64] {
        &self.prefix_x
    }

    /// Number of non-finite entries filtered out at construction.
    pub fn dropped_non_finite(&self) -> usize {
        self.dropped_non_finite
    }

    /// Number of observations `<= x` (the size of `S` at threshold `x`).
    pub fn count_at_or_below(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v <= x)
    }

    /// Split statistics at an arbitrary threshold.
    pub fn split_at(&self, x_min: f64) -> SplitStats {
        self.stats_for_core_count(self.count_at_or_below(x_min))
    }

    /// Split statistics when the first `n_s` sorted observations form the core.
    pub fn stats_for_core_count(&self, n_s: usize) -> SplitStats {
        let n = self.values.len();
        assert!(n_s <= n, "core count {n_s} exceeds sample size {n}");
        let n_l = n - n_s;
        let (mean_ln_s, mean_x_s) = if n_s > 0 {
            (self.prefix_ln[n_s] / n_s as f64, self.prefix_x[n_s] / n_s as f64)
        } else {
            (0.0, 0.0)
        };
        let mean_ln_l = if n_l > 0 { self.suffix_ln[n_s] / n_l as f64 } else { 0.0 };
        SplitStats { n, n_l, n_s, mean_ln_l, mean_ln_s, mean_x_s }
    }

    /// Number of observations `<= uniques[j]`.
    pub fn core_count_at_unique(&self, j: usize) -> usize {
        self.unique_end[j]
    }

    /// Interval `[y_j, y_{j+1})` for a zero-based `j < m - 1`.
    pub fn interval(&self, j: usize) -> Interval {
        Interval {
            index: j,
            lower: self.uniques[j],
            upper: self.uniques[j + 1],
            stats: self.stats_for_core_count(self.unique_end[j]),
        }
    }

    /// Number of scan intervals, `m - 1`.
    pub fn interval_count(&self) -> usize {
        self.uniques.len() - 1
    }

    /// The intervals `[y_j, y_{j+1})`, `j = 0 .. m-2`, in ascending order.
    pub fn intervals(&self) -> impl ExactSizeIterator<Item = Interval> + '_ {
        (0..self.interval_count()).map(move |j| self.interval(j))
    }

    /// Zero-based index of the interval containing `x` (`y_j <= x < y_{j+1}`),
    /// clamped to the first/last interval for points outside `[y_1, y_m)`.
    pub fn interval_containing(&self, x: f64) -> usize {
        let k = self.uniques.partition_point(|&y| y <= x);
        k.saturating_sub(1).min(self.interval_count() - 1)
    }

    /// Core observations (the first `n_s` sorted values).
    pub fn core_values(&self, n_s: usize) -> &[f64] {
        &self.values[..n_s]
    }
}

/// Parses the shared text format: one decimal observation per line, blank lines
/// and lines starting with `#` ignored.
pub fn parse_observations(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("cannot parse {t:?} as a number"),
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Reads and parses an observation file.
pub fn read_observations(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_observations(&text)
}
