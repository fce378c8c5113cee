//! Case records and report serialization.

use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use super::{ExperimentConfig, ExperimentError, OutputFormat};
use crate::graph::Divisor;

pub const REPORT_SCHEMA: &str = "chipfire-report/1";

/// Column order of the CSV output. Frozen; new columns go at the end.
pub const CSV_COLUMNS: [&str; 14] = [
    "case_index",
    "vertices",
    "genus",
    "graph",
    "divisor",
    "degree",
    "rank",
    "rank_dual",
    "residual",
    "toric_rank",
    "toric_rank_dual",
    "toric_residual",
    "pass",
    "anomalies",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseRecord {
    pub case_index: usize,
    pub vertices: usize,
    pub genus: i64,
    /// Adjacency rows separated by `;`, entries by spaces.
    pub graph: String,
    pub divisor: Divisor,
    pub degree: i64,
    pub rank: i64,
    pub rank_dual: i64,
    pub residual: i64,
    pub toric_rank: Option<i64>,
    pub toric_rank_dual: Option<i64>,
    pub toric_residual: Option<i64>,
    pub pass: bool,
    pub anomalies: Vec<String>,
}

impl CaseRecord {
    /// The graph residual is nonzero.
    pub fn graph_violation(&self) -> bool {
        self.residual != 0
    }

    /// The toric residual was computed and is nonzero.
    pub fn toric_violation(&self) -> bool {
        self.toric_residual.is_some_and(|r| r != 0)
    }

    fn csv_row(&self) -> Vec<String> {
        let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
        let divisor = self.divisor.coeffs().iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        vec![
            self.case_index.to_string(),
            self.vertices.to_string(),
            self.genus.to_string(),
            self.graph.clone(),
            divisor,
            self.degree.to_string(),
            self.rank.to_string(),
            self.rank_dual.to_string(),
            self.residual.to_string(),
            opt(self.toric_rank),
            opt(self.toric_rank_dual),
            opt(self.toric_residual),
            self.pass.to_string(),
            self.anomalies.join("|"),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub graph_violations: usize,
    pub toric_violations: usize,
    /// Cases with at least one anomaly.
    pub anomalous_cases: usize,
}

impl Summary {
    pub fn add(&mut self, r: &CaseRecord) {
        self.cases += 1;
        if r.pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.graph_violations += r.graph_violation() as usize;
        self.toric_violations += r.toric_violation() as usize;
        self.anomalous_cases += !r.anomalies.is_empty() as usize;
    }

    pub fn of(records: &[CaseRecord]) -> Self {
        let mut s = Summary::default();
        records.iter().for_each(|r| s.add(r));
        s
    }

    pub fn has_violation(&self) -> bool {
        self.failed > 0
    }
}

enum Sink<W: Write> {
    Json { out: W, first: bool },
    Csv(Box<csv::Writer<W>>),
}

/// Incremental report serializer.
///
/// JSON layout: an object with `schema`, `config`, `records` (one compact
/// object per line) and `summary`, in that order. CSV layout: the header
/// [`CSV_COLUMNS`] and one row per record; configuration and summary are not
/// part of the CSV form.
pub struct ReportWriter<W: Write> {
    sink: Sink<W>,
    summary: Summary,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(mut out: W, config: &ExperimentConfig, format: OutputFormat) -> Result<Self, ExperimentError> {
        let sink = match format {
            OutputFormat::Json => {
                write!(
                    out,
                    "{{\n  \"schema\": {},\n  \"config\": {},\n  \"records\": [",
                    serde_json::to_string(REPORT_SCHEMA)?,
                    serde_json::to_string(config)?
                )?;
                Sink::Json { out, first: true }
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(CSV_COLUMNS)?;
                Sink::Csv(Box::new(w))
            }
        };
        Ok(ReportWriter { sink, summary: Summary::default() })
    }

    pub fn record(&mut self, r: &CaseRecord) -> Result<(), ExperimentError> {
        self.summary.add(r);
        match &mut self.sink {
            Sink::Json { out, first } => {
                out.write_all(if *first { b"\n    " } else { b",\n    " })?;
                *first = false;
                serde_json::to_writer(&mut *out, r)?;
            }
            Sink::Csv(w) => w.write_record(r.csv_row())?,
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(Summary, W), ExperimentError> {
        let out = match self.sink {
            Sink::Json { mut out, .. } => {
                write!(out, "\n  ],\n  \"summary\": {}\n}}\n", serde_json::to_string(&self.summary)?)?;
                out
            }
            Sink::Csv(w) => w.into_inner().map_err(|e| ExperimentError::Io(e.into_error()))?,
        };
        let mut out = out;
        out.flush()?;
        Ok((self.summary, out))
    }
}

/// A finished sweep held in memory. `wall_clock` is not serialized, so
/// reruns produce identical bytes.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub records: Vec<CaseRecord>,
    pub wall_clock: Duration,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig, records: Vec<CaseRecord>, wall_clock: Duration) -> Self {
        ExperimentReport { summary: Summary::of(&records), config, records, wall_clock }
    }

    pub fn has_violation(&self) -> bool {
        self.summary.has_violation()
    }

    pub fn write_to<W: Write>(&self, out: W, format: OutputFormat) -> Result<W, ExperimentError> {
        let mut w = ReportWriter::new(out, &self.config, format)?;
        for r in &self.records {
            w.record(r)?;
        }
        Ok(w.finish()?.1)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, ExperimentError> {
        let bytes = self.write_to(Vec::new(), format)?;
        Ok(String::from_utf8(bytes).expect("report output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String, ExperimentError> {
        self.render(OutputFormat::Json)
    }

    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        self.render(OutputFormat::Csv)
    }
}
