//! The three intermittent-user tables: Idealistic vs Frame-Based under the
//! calibrated link, the slow/fast source comparison, and FDMA vs NOMA.
//!
//! Tables are assembled from ordinary sweeps, so every entry is a
//! replication mean with its standard error.

use std::fmt::Write as _;
use std::io::Write;

use crate::engine::TimingModel;
use crate::error::Result;
use crate::phy::Scheme;
use crate::source::DtmcParams;

use super::config::ExperimentSpec;
use super::csv::format_float;
use super::par::Execution;
use super::sweep::{run_experiment, summarize, Estimate, SummaryRow};

/// Per-attempt success probability that stands in for the intermittent
/// link in the calibrated tables.
pub const CALIBRATED_SUCCESS: f64 = 0.62;
pub const TABLE_B2_FRACTION: f64 = 0.4;
pub const TABLE_DISTANCE_M: f64 = 400.0;
pub const SLOW_SOURCE: DtmcParams = DtmcParams { p_s: 0.1, q_s: 0.15 };
pub const FAST_SOURCE: DtmcParams = DtmcParams { p_s: 0.2, q_s: 0.7 };

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    /// Row label and one entry per column.
    pub rows: Vec<(String, Vec<Option<Estimate>>)>,
}

impl Table {
    /// Fixed-width text, `mean ± stderr` per cell.
    pub fn render(&self) -> String {
        let cell = |e: &Option<Estimate>| match e {
            Some(e) => format!("{:.4} ± {:.4}", e.mean, e.stderr),
            None => "-".to_string(),
        };
        let label_w = self.rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(6);
        let col_w = self
            .columns
            .iter()
            .map(|c| c.chars().count())
            .chain(
                self.rows
                    .iter()
                    .flat_map(|r| r.1.iter().map(|e| cell(e).chars().count())),
            )
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        let _ = write!(out, "{:label_w$}", "");
        for c in &self.columns {
            let _ = write!(out, "  {c:>col_w$}");
        }
        out.push('\n');
        for (label, entries) in &self.rows {
            let _ = write!(out, "{label:label_w$}");
            for e in entries {
                let _ = write!(out, "  {:>col_w$}", cell(e));
            }
            out.push('\n');
        }
        out
    }

    /// Long format: `table,row,column,mean,stderr,count`.
    pub fn write_csv<W: Write>(&self, w: &mut csv::Writer<W>) -> Result<()> {
        for (label, entries) in &self.rows {
            for (col, e) in self.columns.iter().zip(entries) {
                let (m, s, n) = match e {
                    Some(e) => (format_float(e.mean), format_float(e.stderr), e.count.to_string()),
                    None => (String::new(), String::new(), "0".to_string()),
                };
                w.write_record([self.title.as_str(), label, col, &m, &s, &n])?;
            }
        }
        Ok(())
    }
}

/// Writes several tables into one long-format CSV.
pub fn write_tables_csv<W: Write>(tables: &[Table], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["table", "row", "column", "mean", "stderr", "count"])?;
    for t in tables {
        t.write_csv(&mut w)?;
    }
    w.flush().map_err(::csv::Error::from)?;
    Ok(())
}

/// Settings shared by every table: horizon, replications, seed, and which
/// parameters not fixed by the table come from.
#[derive(Clone, Debug)]
pub struct TableSettings {
    pub base: ExperimentSpec,
    pub execution: Execution,
}

fn single_point(settings: &TableSettings, source: DtmcParams, calibrated: bool) -> ExperimentSpec {
    let mut spec = settings.base.clone();
    spec.base.source = source;
    spec.base.success_override = calibrated.then_some(CALIBRATED_SUCCESS);
    spec.sweep.b2_fractions = vec![TABLE_B2_FRACTION];
    spec.sweep.distances_m = vec![TABLE_DISTANCE_M];
    spec.sweep.schemes = vec![Scheme::Fdma];
    spec.sweep.models = vec![TimingModel::Idealistic, TimingModel::FrameBased];
    spec
}

fn by_model(summary: &[SummaryRow], model: TimingModel) -> &SummaryRow {
    summary
        .iter()
        .find(|s| s.point.model == model)
        .expect("both models are swept")
}

fn metric_rows(cols: &[&SummaryRow]) -> Vec<(String, Vec<Option<Estimate>>)> {
    vec![
        ("TARE".to_string(), cols.iter().map(|s| Some(s.tare)).collect()),
        ("TACAE".to_string(), cols.iter().map(|s| Some(s.tacae)).collect()),
        ("UDC".to_string(), cols.iter().map(|s| s.udc).collect()),
    ]
}

/// Idealistic vs Frame-Based at B2 = 0.4 B, d = 400 m, slow source, with
/// the calibrated intermittent link.
pub fn models_table(settings: &TableSettings) -> Result<Table> {
    let rows = run_experiment(&single_point(settings, SLOW_SOURCE, true), settings.execution)?;
    let summary = summarize(&rows);
    let cols = [
        by_model(&summary, TimingModel::Idealistic),
        by_model(&summary, TimingModel::FrameBased),
    ];
    Ok(Table {
        title: "Intermittent user, B2 = 0.4 B, d = 400 m".into(),
        columns: vec!["Idealistic".into(), "Frame-Based".into()],
        rows: metric_rows(&cols),
    })
}

/// Slow (0.1, 0.15) vs fast (0.2, 0.7) source under both models.
pub fn source_table(settings: &TableSettings) -> Result<Table> {
    let slow = summarize(&run_experiment(
        &single_point(settings, SLOW_SOURCE, true),
        settings.execution,
    )?);
    let fast = summarize(&run_experiment(
        &single_point(settings, FAST_SOURCE, true),
        settings.execution,
    )?);
    let cols = [
        by_model(&slow, TimingModel::Idealistic),
        by_model(&fast, TimingModel::Idealistic),
        by_model(&slow, TimingModel::FrameBased),
        by_model(&fast, TimingModel::FrameBased),
    ];
    Ok(Table {
        title: "Intermittent user with source variability".into(),
        columns: vec![
            "Idealistic slow".into(),
            "Idealistic fast".into(),
            "Frame-Based slow".into(),
            "Frame-Based fast".into(),
        ],
        rows: metric_rows(&cols),
    })
}

/// FDMA (B2 = 0.4 B) vs NOMA in the frame-based model, PHY-driven, per
/// intermittent distance.
pub fn access_table(settings: &TableSettings) -> Result<Table> {
    let mut spec = settings.base.clone();
    spec.base.source = SLOW_SOURCE;
    spec.base.success_override = None;
    spec.sweep.b2_fractions = vec![TABLE_B2_FRACTION];
    spec.sweep.distances_m = super::config::REFERENCE_DISTANCES_M.to_vec();
    spec.sweep.schemes = vec![Scheme::Fdma, Scheme::Noma];
    spec.sweep.models = vec![TimingModel::FrameBased];
    let summary = summarize(&run_experiment(&spec, settings.execution)?);
    let rows = spec
        .sweep
        .distances_m
        .iter()
        .map(|&d| {
            let at = |scheme| {
                summary
                    .iter()
                    .find(|s| s.point.scheme == scheme && s.point.distance_m == d)
                    .expect("grid point present")
            };
            let (f, n) = (at(Scheme::Fdma), at(Scheme::Noma));
            (format!("d = {d} m"), vec![Some(f.tacae), Some(n.tacae), f.udc, n.udc])
        })
        .collect();
    Ok(Table {
        title: "Intermittent user: FDMA vs NOMA".into(),
        columns: vec![
            "TACAE FDMA".into(),
            "TACAE NOMA".into(),
            "UDC FDMA".into(),
            "UDC NOMA".into(),
        ],
        rows,
    })
}

pub fn all_tables(settings: &TableSettings) -> Result<Vec<Table>> {
    Ok(vec![
        models_table(settings)?,
        source_table(settings)?,
        access_table(settings)?,
    ])
}
