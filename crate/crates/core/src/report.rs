//! Pass/fail records for bound verification, plus CSV/JSON emission.
//!
//! A report compares an estimated left-hand side (with confidence interval)
//! against a bound. Verdicts are one-sided for inequality checks — pass only
//! when the whole CI clears the bound, fail only when the whole CI violates
//! it, inconclusive when the CI straddles — and two-sided containment for
//! attainment checks. "Inconclusive" is a first-class outcome so that
//! heavy-tailed Monte Carlo noise never manufactures a hard failure.

use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Relative fuzz applied to deterministic comparisons so that bounds
/// attained exactly (equal up to rounding) still count as satisfied.
const FUZZ: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// lhs <= rhs
    UpperBound,
    /// lhs >= rhs
    LowerBound,
    /// lhs == rhs within the CI (attained bounds, tight examples)
    Equality,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub id: String,
    pub relation: Relation,
    pub lhs: f64,
    pub lhs_ci: (f64, f64),
    pub rhs: f64,
    /// Margin by which the check holds; negative means violated.
    pub slack: f64,
    pub verdict: Verdict,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub config: serde_json::Value,
}

impl BoundReport {
    pub fn new(
        id: impl Into<String>,
        relation: Relation,
        lhs: f64,
        lhs_ci: (f64, f64),
        rhs: f64,
        config: serde_json::Value,
    ) -> BoundReport {
        let fuzz = FUZZ * rhs.abs().max(1.0);
        let (verdict, slack) = match relation {
            Relation::UpperBound => {
                let v = if lhs_ci.1 <= rhs + fuzz {
                    Verdict::Pass
                } else if lhs_ci.0 > rhs + fuzz {
                    Verdict::Fail
                } else {
                    Verdict::Inconclusive
                };
                (v, rhs - lhs_ci.1)
            }
            Relation::LowerBound => {
                let v = if lhs_ci.0 >= rhs - fuzz {
                    Verdict::Pass
                } else if lhs_ci.1 < rhs - fuzz {
                    Verdict::Fail
                } else {
                    Verdict::Inconclusive
                };
                (v, lhs_ci.0 - rhs)
            }
            Relation::Equality => {
                // pass on containment; a 95% interval misses a true value
                // ~5% of the time, so a miss within one CI-width is only
                // inconclusive — fail needs a decisive (many-sigma) miss
                let miss = (lhs_ci.0 - rhs).max(rhs - lhs_ci.1);
                let width = lhs_ci.1 - lhs_ci.0;
                let v = if miss <= fuzz {
                    Verdict::Pass
                } else if miss > width {
                    Verdict::Fail
                } else {
                    Verdict::Inconclusive
                };
                (v, (rhs - lhs_ci.0).min(lhs_ci.1 - rhs))
            }
        };
        BoundReport {
            id: id.into(),
            relation,
            lhs,
            lhs_ci,
            rhs,
            slack,
            verdict,
            seed: None,
            samples: None,
            config,
        }
    }

    /// Deterministic comparison: the CI collapses to the point value.
    pub fn exact(
        id: impl Into<String>,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        config: serde_json::Value,
    ) -> BoundReport {
        BoundReport::new(id, relation, lhs, (lhs, lhs), rhs, config)
    }

    pub fn with_seed(mut self, seed: u64) -> BoundReport {
        self.seed = Some(seed);
        self
    }

    pub fn with_samples(mut self, samples: u64) -> BoundReport {
        self.samples = Some(samples);
        self
    }
}

/// A full run: the resolved configuration plus every report it produced.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub master_seed: u64,
    pub config: serde_json::Value,
    pub reports: Vec<BoundReport>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>, master_seed: u64, config: serde_json::Value) -> Self {
        ReportDocument {
            command: command.into(),
            master_seed,
            config,
            reports: Vec::new(),
        }
    }

    /// Process exit code: 0 all pass, 2 any fail, 3 inconclusive but no fail.
    pub fn exit_code(&self) -> i32 {
        let any_fail = self.reports.iter().any(|r| r.verdict == Verdict::Fail);
        let any_inconclusive = self
            .reports
            .iter()
            .any(|r| r.verdict == Verdict::Inconclusive);
        if any_fail {
            2
        } else if any_inconclusive {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    /// CSV with one row per report. Columns are stable:
    /// id,relation,lhs,ci_low,ci_high,rhs,slack,verdict,seed,samples,config
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("id,relation,lhs,ci_low,ci_high,rhs,slack,verdict,seed,samples,config\n");
        for r in &self.reports {
            let relation = match r.relation {
                Relation::UpperBound => "upper_bound",
                Relation::LowerBound => "lower_bound",
                Relation::Equality => "equality",
            };
            let verdict = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::Inconclusive => "inconclusive",
            };
            let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
            let samples = r.samples.map(|s| s.to_string()).unwrap_or_default();
            let config = csv_escape(&r.config.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                csv_escape(&r.id),
                relation,
                r.lhs,
                r.lhs_ci.0,
                r.lhs_ci.1,
                r.rhs,
                r.slack,
                verdict,
                seed,
                samples,
                config
            );
        }
        out
    }

    pub fn write_files(&self, dir: &Path, basename: &str, format: OutputFormat) -> Result<()> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::config(format!("cannot create {}: {e}", dir.display())))?;
        let write = |ext: &str, body: String| -> Result<()> {
            let path = dir.join(format!("{basename}.{ext}"));
            std::fs::write(&path, body)
                .map_err(|e| Error::config(format!("cannot write {}: {e}", path.display())))
        };
        match format {
            OutputFormat::Csv => write("csv", self.to_csv()),
            OutputFormat::Json => write("json", self.to_json()),
            OutputFormat::Both => {
                write("csv", self.to_csv())?;
                write("json", self.to_json())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
