use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DecayFit, ExperimentConfig};
use crate::error::{FioError, Result};
use crate::field::GridSpec;

/// Version tag written into every CSV row and summary.
pub const SCHEMA: &str = "fio-lab/1";

pub const CSV_NAME: &str = "measurements.csv";
pub const SUMMARY_NAME: &str = "summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Passed,
    Failed,
    /// A sub-operation failed before the rules could be judged.
    Error,
}

/// One acceptance rule and its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A named measurement series; each point is `(index, abscissa, value)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub points: Vec<(i64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    pub series: String,
    pub fit: DecayFit,
}

/// A threshold quoted from the thresholds module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdValue {
    pub name: String,
    /// Exact rational form, when computed exactly.
    pub exact: Option<String>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub experiment: String,
    pub config: ExperimentConfig,
    pub grid: Option<GridSpec>,
    pub budget: f64,
    pub status: Status,
    pub rules: Vec<Rule>,
    pub measurements: Vec<Series>,
    pub fits: Vec<NamedFit>,
    pub thresholds: Vec<ThresholdValue>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    pub wall_clock_seconds: f64,
}

#[derive(Serialize)]
struct Row<'a> {
    schema: &'a str,
    experiment: &'a str,
    series: &'a str,
    index: i64,
    abscissa: f64,
    value: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    /// The measurement rows as CSV text; independent of timing.
    pub fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| FioError::Io(e.to_string());
        if self.measurements.iter().all(|s| s.points.is_empty()) {
            w.write_record(["schema", "experiment", "series", "index", "abscissa", "value"])
                .map_err(io)?;
        }
        for s in &self.measurements {
            for &(index, abscissa, value) in &s.points {
                w.serialize(Row {
                    schema: SCHEMA,
                    experiment: &self.experiment,
                    series: &s.name,
                    index,
                    abscissa,
                    value,
                })
                .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| FioError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| FioError::Io(e.to_string()))
    }

    pub fn summary_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| FioError::Io(e.to_string()))
    }

    /// Writes `measurements.csv` and `summary.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(CSV_NAME), self.csv()?)?;
        std::fs::write(dir.join(SUMMARY_NAME), self.summary_json()?)?;
        Ok(())
    }

    /// One line per rule plus the status.
    pub fn render(&self) -> String {
        let mut out = format!("{} [{}]\n", self.experiment, status_word(self.status));
        for r in &self.rules {
            out.push_str(&format!(
                "  {} {}: {}\n",
                if r.passed { "ok  " } else { "FAIL" },
                r.name,
                r.detail
            ));
        }
        for t in &self.thresholds {
            match &t.exact {
                Some(e) => out.push_str(&format!("  threshold {} = {} ({:.6})\n", t.name, e, t.value)),
                None => out.push_str(&format!("  threshold {} = {:.6}\n", t.name, t.value)),
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("  warning: {w}\n"));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("  error: {e}\n"));
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Passed => "passed",
        Status::Failed => "failed",
        Status::Error => "error",
    }
}
