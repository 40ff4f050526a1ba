use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    ThmParallel,
    Table1Row,
    ThmSdiff,
    ThmQuadratic,
    LemmaSrange,
    PropCategorize,
    Nonrevisiting,
    Hirsch,
    CartesianAdditivity,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::ThmParallel,
        Check::Table1Row,
        Check::ThmSdiff,
        Check::ThmQuadratic,
        Check::LemmaSrange,
        Check::PropCategorize,
        Check::Nonrevisiting,
        Check::Hirsch,
        Check::CartesianAdditivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::ThmParallel => "thm-parallel",
            Check::Table1Row => "table1-row",
            Check::ThmSdiff => "thm-sdiff",
            Check::ThmQuadratic => "thm-quadratic",
            Check::LemmaSrange => "lemma-srange",
            Check::PropCategorize => "prop-categorize",
            Check::Nonrevisiting => "nonrevisiting",
            Check::Hirsch => "hirsch",
            Check::CartesianAdditivity => "cartesian-additivity",
        }
    }

    /// Comma-separated names; `all` selects every check.
    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok == "all" {
                out.extend(Check::ALL);
            } else {
                out.push(tok.parse()?);
            }
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::Input("no checks selected".into()));
        }
        Ok(out)
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown check {s:?}")))
    }
}

/// One verified claim on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub instance_id: String,
    pub kind: String,
    pub check: Check,
    pub initial_split: String,
    pub final_split: String,
    pub inequality: String,
    pub measured: u64,
    pub bound: u64,
    /// The claim checked, in words.
    pub reference: String,
    pub pass: bool,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

impl BoundReport {
    pub fn new(instance_id: &str, kind: &str, check: Check, reference: &str) -> Self {
        BoundReport {
            instance_id: instance_id.to_string(),
            kind: kind.to_string(),
            check,
            initial_split: String::new(),
            final_split: String::new(),
            inequality: String::new(),
            measured: 0,
            bound: 0,
            reference: reference.to_string(),
            pass: true,
            note: String::new(),
            runtime_ms: None,
        }
    }

    /// `measured <= bound`.
    pub fn le(mut self, measured: usize, bound: usize) -> Self {
        self.measured = measured as u64;
        self.bound = bound as u64;
        self.pass = measured <= bound;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Input(format!("unknown report format {s:?}"))),
        }
    }
}

const CSV_HEADER: [&str; 12] = [
    "instance_id",
    "kind",
    "check",
    "initial_split",
    "final_split",
    "inequality",
    "measured",
    "bound",
    "reference",
    "pass",
    "note",
    "runtime_ms",
];

/// Writes reports in a fixed order: by instance, then check, keeping the
/// campaign order within a check. Runtime is written only when present.
pub fn emit_report(reports: &[BoundReport], format: ReportFormat, out: &mut dyn Write) -> Result<()> {
    let mut sorted: Vec<&BoundReport> = reports.iter().collect();
    sorted.sort_by(|a, b| (&a.instance_id, a.check).cmp(&(&b.instance_id, b.check)));
    let timed = sorted.iter().any(|r| r.runtime_ms.is_some());
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &sorted)?;
            writeln!(out)?;
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let cols = if timed { &CSV_HEADER[..] } else { &CSV_HEADER[..11] };
            w.write_record(cols)?;
            for r in sorted {
                let mut row = vec![
                    r.instance_id.clone(),
                    r.kind.clone(),
                    r.check.to_string(),
                    r.initial_split.clone(),
                    r.final_split.clone(),
                    r.inequality.clone(),
                    r.measured.to_string(),
                    r.bound.to_string(),
                    r.reference.clone(),
                    r.pass.to_string(),
                    r.note.clone(),
                ];
                if timed {
                    row.push(r.runtime_ms.map(|t| t.to_string()).unwrap_or_default());
                }
                w.write_record(&row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Reads back a JSON report.
pub fn parse_json_report(text: &str) -> Result<Vec<BoundReport>> {
    Ok(serde_json::from_str(text)?)
}
