//! Report assembly and the JSON, CSV and table renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::scenario::{Expect, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// One evaluated residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    /// Law name or residual name (`momentum`, `energy`, ...).
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    pub residual: f64,
    pub scale: f64,
    /// `|residual| / max(scale, 1)`, the number compared with the tolerance.
    pub relative: f64,
    pub pass: bool,
}

impl Record {
    pub fn new(label: impl Into<String>, residual: f64, scale: f64) -> Self {
        Record {
            label: label.into(),
            point: None,
            time: None,
            residual,
            scale,
            relative: residual.abs() / scale.max(1.0),
            pass: false,
        }
    }

    pub fn at(mut self, point: [f64; 3]) -> Self {
        self.point = Some(point);
        self
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.time = Some(t);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub index: usize,
    pub name: String,
    pub kind: &'static str,
    pub expect: Expect,
    pub tolerance: f64,
    pub status: Status,
    /// Largest relative residual over the records, 0 when there are none.
    pub max_relative: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub records: Vec<Record>,
}

impl CheckReport {
    /// Grades `records` against the tolerance; an `error` overrides the grade.
    pub fn graded(
        index: usize,
        name: String,
        kind: &'static str,
        expect: Expect,
        tolerance: f64,
        mut records: Vec<Record>,
        error: Option<String>,
    ) -> Self {
        for r in &mut records {
            r.pass = match expect {
                Expect::Zero => r.relative <= tolerance,
                Expect::Nonzero | Expect::AnyNonzero => r.relative > tolerance,
            };
        }
        let ok = match expect {
            Expect::Zero | Expect::Nonzero => records.iter().all(|r| r.pass),
            Expect::AnyNonzero => records.iter().any(|r| r.pass),
        };
        let status = match (&error, ok) {
            (Some(_), _) => Status::Error,
            (None, true) => Status::Pass,
            (None, false) => Status::Fail,
        };
        let max_relative = records.iter().map(|r| r.relative).fold(0.0, f64::max);
        CheckReport {
            index,
            name,
            kind,
            expect,
            tolerance,
            status,
            max_relative,
            error,
            records,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub records: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub scenario: Scenario,
    pub summary: Summary,
    pub checks: Vec<CheckReport>,
    /// Only set on request; it would break byte-identical reruns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_seconds: Option<f64>,
}

impl Report {
    pub fn new(scenario: Scenario, checks: Vec<CheckReport>) -> Self {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            checks: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
            records: checks.iter().map(|c| c.records.len()).sum(),
        };
        Report {
            tool: Tool {
                name: "vkwave",
                version: env!("CARGO_PKG_VERSION"),
            },
            scenario,
            summary,
            checks,
            duration_seconds: None,
        }
    }

    /// 0 if every check passed, 2 if any raised an error, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.errors > 0 {
            2
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    index: usize,
    name: &'a str,
    kind: &'a str,
    status: &'a str,
    records: usize,
    max_relative: f64,
    tolerance: f64,
    expect: Expect,
    error: &'a str,
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("reports serialise to JSON");
            out.push(b'\n');
            out
        }
        Format::Csv => csv_bytes(report),
        Format::Human => human(report).into_bytes(),
    }
}

fn csv_bytes(report: &Report) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if report.checks.is_empty() {
        w.write_record([
            "index",
            "name",
            "kind",
            "status",
            "records",
            "max_relative",
            "tolerance",
            "expect",
            "error",
        ])
        .expect("writing to memory");
    }
    for c in &report.checks {
        w.serialize(CsvRow {
            index: c.index,
            name: &c.name,
            kind: c.kind,
            status: c.status.as_str(),
            records: c.records.len(),
            max_relative: c.max_relative,
            tolerance: c.tolerance,
            expect: c.expect,
            error: c.error.as_deref().unwrap_or(""),
        })
        .expect("writing to memory");
    }
    w.into_inner().expect("flushing to memory")
}

fn human(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}  seed {}", report.tool.name, report.tool.version, report.scenario.seed);
    let _ = writeln!(
        s,
        "{:>3}  {:<24} {:<14} {:<6} {:>7} {:>12} {:>10}",
        "#", "name", "kind", "status", "records", "max_rel", "tolerance"
    );
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{:>3}  {:<24} {:<14} {:<6} {:>7} {:>12.3e} {:>10.1e}",
            c.index,
            truncate(&c.name, 24),
            c.kind,
            c.status.as_str(),
            c.records.len(),
            c.max_relative,
            c.tolerance
        );
        if let Some(e) = &c.error {
            let _ = writeln!(s, "     error: {e}");
        }
    }
    let m = report.summary;
    let _ = writeln!(
        s,
        "{} checks: {} passed, {} failed, {} errors ({} records)",
        m.checks, m.passed, m.failed, m.errors, m.records
    );
    if let Some(d) = report.duration_seconds {
        let _ = writeln!(s, "duration {d:.3} s");
    }
    s
}

fn truncate(s: &str, width: usize) -> String {
    if s.chars().count() <= width {
        s.to_string()
    } else {
        let mut t: String = s.chars().take(width - 1).collect();
        t.push('~');
        t
    }
}
