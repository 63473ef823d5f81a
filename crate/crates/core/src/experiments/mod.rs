//! Scenario runners reproducing the three applications at desk scale:
//! the fellow-traveling counterexample, fellow traveling with thick
//! endpoints and no backtracking, plus the ends dichotomy.
//!
//! A report is a table of per-run rows with a summary computed from the
//! rounded rows, so every summary value can be recomputed from the output.

mod backtrack;
mod counterexample;
mod ends;
mod fellow;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{round_sig, Cell, Table};

pub use backtrack::{backtrack_ray, random_direction_torus, run_backtrack_suite, BacktrackConfig, BacktrackRun};
pub use counterexample::{run_counterexample, CounterexampleConfig};
pub use ends::{run_ends_check, EndsCheckConfig};
pub use fellow::{fellow_travel, run_fellow_travel, FellowTravelConfig, FellowTravelRun};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Backtrack,
    FellowTravel,
    Counterexample,
    EndsCheck,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scenario::Backtrack => "backtrack",
            Scenario::FellowTravel => "fellow_travel",
            Scenario::Counterexample => "counterexample",
            Scenario::EndsCheck => "ends_check",
        })
    }
}

/// A scenario with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum ScenarioConfig {
    Backtrack(BacktrackConfig),
    FellowTravel(FellowTravelConfig),
    Counterexample(CounterexampleConfig),
    EndsCheck(EndsCheckConfig),
}

impl ScenarioConfig {
    pub fn scenario(&self) -> Scenario {
        match self {
            ScenarioConfig::Backtrack(_) => Scenario::Backtrack,
            ScenarioConfig::FellowTravel(_) => Scenario::FellowTravel,
            ScenarioConfig::Counterexample(_) => Scenario::Counterexample,
            ScenarioConfig::EndsCheck(_) => Scenario::EndsCheck,
        }
    }

    pub fn run(&self) -> Result<ScenarioReport> {
        match self {
            ScenarioConfig::Backtrack(c) => run_backtrack_suite(c),
            ScenarioConfig::FellowTravel(c) => run_fellow_travel(c),
            ScenarioConfig::Counterexample(c) => run_counterexample(c),
            ScenarioConfig::EndsCheck(c) => run_ends_check(c),
        }
    }
}

/// Where a report came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: serde_json::Value,
    pub package: String,
    pub version: String,
}

impl Provenance {
    fn of(config: &impl Serialize) -> Self {
        Provenance {
            config: serde_json::to_value(config).expect("config serializes"),
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub scenario: Scenario,
    pub provenance: Provenance,
    pub summary: BTreeMap<String, f64>,
    #[serde(flatten)]
    pub table: Table,
}

/// Output encoding of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Tsv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParameter(format!("unknown format `{s}`"))),
        }
    }
}

impl ScenarioReport {
    fn new(scenario: Scenario, config: &impl Serialize, table: Table, summary: BTreeMap<String, f64>) -> Self {
        ScenarioReport {
            schema_version: REPORT_SCHEMA_VERSION,
            scenario,
            provenance: Provenance::of(config),
            summary: summary.into_iter().map(|(k, v)| (k, round_sig(v))).collect(),
            table,
        }
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.get(key).copied()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: ScenarioReport = serde_json::from_str(text)?;
        if r.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::Document(format!("unsupported schema_version {}", r.schema_version)));
        }
        Ok(r)
    }

    /// Provenance and summary as `#` comments, then the table.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# schema_version: {}\n# scenario: {}\n", self.schema_version, self.scenario);
        out.push_str(&format!("# {}: {}\n", self.provenance.package, self.provenance.version));
        out.push_str(&format!("# config: {}\n", self.provenance.config));
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary {k}: {}\n", crate::table::fmt_sig(*v)));
        }
        out.push_str(&self.table.to_tsv());
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => self.to_tsv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes `<dir>/<scenario>.<ext>` atomically and returns its path.
    pub fn write(&self, dir: &Path, format: Format) -> Result<PathBuf> {
        let path = dir.join(format!("{}.{}", self.scenario, format.extension()));
        write_atomic(&path, self.render(format).as_bytes())?;
        Ok(path)
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Least-squares slope of `y` against `x`.
pub fn fitted_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let sxy: f64 = (0..n).map(|i| (x[i] - mx) * (y[i] - my)).sum();
    let sxx: f64 = (0..n).map(|i| (x[i] - mx) * (x[i] - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn error_cell(e: &Error) -> Cell {
    Cell::text(e)
}
