//! Subcommand drivers: read inputs, call into [`crate::report`], write outputs.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use ppareto::{distributions, read_observations, DegreeSample, FamilyId, FamilyParams, Pinned, SolverConfig, SortedSample};

use crate::args::{FitArgs, HistArgs, ParamArgs, SampleArgs, SantaFeArgs, TabulateArgs};
use crate::report::{fit_report, histogram, santafe_report, tabulate as tabulate_rows};
use crate::CliError;

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Data(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Data(format!("stdout: {e}"))),
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Data(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn load_sample(path: &Path) -> Result<SortedSample, CliError> {
    Ok(SortedSample::new(&read_observations(path)?)?)
}

fn params(a: &ParamArgs) -> Result<FamilyParams, CliError> {
    Ok(FamilyParams::new(FamilyId::from(a.family), a.alpha, a.beta, a.xmin)?)
}

pub fn fit(a: &FitArgs) -> Result<(), CliError> {
    let mut families: Vec<FamilyId> = a.family.iter().flat_map(|f| f.expand()).collect();
    families.sort();
    families.dedup();
    let sample = load_sample(&a.input)?;
    let pins = Pinned { x_min: a.xmin, beta: a.beta };
    let report = fit_report(&sample, &families, pins, &SolverConfig::default())?;
    emit(a.output.as_ref(), &json(&report)?)
}

pub fn sample(a: &SampleArgs) -> Result<(), CliError> {
    let p = params(&a.params)?;
    let xs = distributions::sample(&p, a.count, a.seed)?;
    let mut out = String::with_capacity(24 * xs.len());
    for x in xs {
        writeln!(out, "{x}").unwrap();
    }
    emit(a.output.as_ref(), &out)
}

pub fn tabulate(a: &TabulateArgs) -> Result<(), CliError> {
    let p = params(&a.params)?;
    let rows = tabulate_rows(&p, a.xmax.unwrap_or(100.0 * p.x_min()), a.points, a.spacing)?;
    let mut out = String::from("x,pdf,cdf\n");
    for [x, pdf, cdf] in rows {
        writeln!(out, "{x:e},{pdf:e},{cdf:e}").unwrap();
    }
    emit(a.output.as_ref(), &out)
}

pub fn hist(a: &HistArgs) -> Result<(), CliError> {
    let values = read_observations(&a.input)?;
    let bins = histogram(&values, a.bins_per_decade)?;
    let mut out = String::from("bin_center,density\n");
    for b in bins {
        writeln!(out, "{:e},{:e}", b.center(), b.density).unwrap();
    }
    emit(a.output.as_ref(), &out)
}

/// Integer contact numbers, one per line; `#` comments and blank lines ignored.
pub fn read_degrees(path: &Path, n_system: u64) -> Result<Vec<u64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let k: u64 = t
            .parse()
            .map_err(|_| CliError::Data(format!("line {}: cannot parse {t:?} as a non-negative integer", i + 1)))?;
        if k == 0 || k + 2 > n_system {
            return Err(CliError::Data(format!(
                "line {}: contact number {k} is outside 1..=N-2 = 1..={}; the asymptotic form needs 0 < k/(N-1) < 1",
                i + 1,
                n_system.saturating_sub(2)
            )));
        }
        out.push(k);
    }
    Ok(out)
}

pub fn santafe(a: &SantaFeArgs) -> Result<(), CliError> {
    if a.n_system < 3 {
        return Err(CliError::Usage(format!("--N must be at least 3, got {}", a.n_system)));
    }
    let degrees = DegreeSample::new(&read_degrees(&a.input, a.n_system)?, a.n_system)?;
    emit(a.output.as_ref(), &json(&santafe_report(&degrees)?)?)
}
