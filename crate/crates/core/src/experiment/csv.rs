//! CSV output.
//!
//! Per-run files have one header line and one record per (grid point,
//! replication), in the column order of [`ROW_COLUMNS`]:
//!
//! | column | meaning |
//! |---|---|
//! | `scheme` | `FDMA` or `NOMA` |
//! | `model` | `frame-based` or `idealistic` |
//! | `distance_m` | intermittent user distance |
//! | `b2_fraction` | intermittent share of the band (empty for NOMA) |
//! | `replication` | replication index, from 0 |
//! | `seed`, `stream` | ChaCha8 seed and stream of the run |
//! | `horizon_frames`, `warmup_frames` | simulated and discarded frames |
//! | `tare`, `tacae` | time-averaged reconstruction error and actuation cost |
//! | `udc` | retransmissions per delivered update (empty if none delivered) |
//! | `attempts`, `retransmissions`, `deliveries` | intermittent transmission counts |
//! | `bb_rate_bps`, `bb_power_w` | broadband rate and power (empty without bandwidth) |
//! | `throughput_bps` | broadband throughput |
//! | `energy_efficiency` | throughput per watt, bit/J (empty without bandwidth) |
//! | `blocks_done`, `mean_frames_per_block` | completed blocks and their mean duration |
//! | `overlap_ii`, `overlap_ie`, `overlap_ei`, `overlap_ee` | shared-band slots by (broadband, intermittent) outcome |
//! | `success_rate` | intermittent deliveries per attempt (empty without attempts) |
//!
//! Summary files (`<stem>.summary.csv`) have one record per grid point with
//! the columns of [`SUMMARY_COLUMNS`]: the coordinates, the replication count,
//! and mean/standard error of `tare`, `tacae`, `udc`, `throughput_bps` and
//! `energy_efficiency`, how many replications had a defined `udc`, and the
//! measured (post-warm-up) frames per run.
//!
//! Measured time counts only post-warm-up frames. Floats carry nine
//! significant digits in scientific notation; counts are plain integers.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::sweep::{Estimate, ResultRow, SummaryRow};

pub const ROW_COLUMNS: [&str; 26] = [
    "scheme",
    "model",
    "distance_m",
    "b2_fraction",
    "replication",
    "seed",
    "stream",
    "horizon_frames",
    "warmup_frames",
    "tare",
    "tacae",
    "udc",
    "attempts",
    "retransmissions",
    "deliveries",
    "bb_rate_bps",
    "bb_power_w",
    "throughput_bps",
    "energy_efficiency",
    "blocks_done",
    "mean_frames_per_block",
    "overlap_ii",
    "overlap_ie",
    "overlap_ei",
    "overlap_ee",
    "success_rate",
];

pub const SUMMARY_COLUMNS: [&str; 17] = [
    "scheme",
    "model",
    "distance_m",
    "b2_fraction",
    "replications",
    "tare_mean",
    "tare_stderr",
    "tacae_mean",
    "tacae_stderr",
    "udc_mean",
    "udc_stderr",
    "udc_count",
    "throughput_mean_bps",
    "throughput_stderr_bps",
    "energy_efficiency_mean",
    "energy_efficiency_stderr",
    "measured_frames",
];

/// Nine significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.8e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn row_record(r: &ResultRow) -> Vec<String> {
    let im = &r.intermittent;
    let bb = &r.broadband;
    let o = &r.overlap.pairs;
    vec![
        r.point.scheme.to_string(),
        r.point.model.to_string(),
        format_float(r.point.distance_m),
        opt(r.point.b2_fraction),
        r.replication.to_string(),
        r.seed.to_string(),
        r.stream.to_string(),
        r.horizon_frames.to_string(),
        r.warmup_frames.to_string(),
        format_float(im.tare),
        format_float(im.tacae),
        opt(im.udc),
        im.attempts.to_string(),
        im.retransmissions.to_string(),
        im.deliveries.to_string(),
        opt(bb.rate_bps),
        opt(bb.power_w),
        format_float(bb.throughput_bps),
        opt(bb.energy_efficiency),
        bb.blocks_done.to_string(),
        opt(bb.mean_frames_per_block),
        o[0][0].to_string(),
        o[0][1].to_string(),
        o[1][0].to_string(),
        o[1][1].to_string(),
        opt(im.success_rate()),
    ]
}

fn summary_record(s: &SummaryRow, measured_frames: u64) -> Vec<String> {
    let pair = |e: Option<Estimate>| match e {
        Some(e) => [format_float(e.mean), format_float(e.stderr)],
        None => [String::new(), String::new()],
    };
    let [tare_m, tare_s] = pair(Some(s.tare));
    let [tacae_m, tacae_s] = pair(Some(s.tacae));
    let [udc_m, udc_s] = pair(s.udc);
    let [s_m, s_s] = pair(Some(s.throughput_bps));
    let [ee_m, ee_s] = pair(s.energy_efficiency);
    vec![
        s.point.scheme.to_string(),
        s.point.model.to_string(),
        format_float(s.point.distance_m),
        opt(s.point.b2_fraction),
        s.replications.to_string(),
        tare_m,
        tare_s,
        tacae_m,
        tacae_s,
        udc_m,
        udc_s,
        s.udc.map_or(0, |u| u.count).to_string(),
        s_m,
        s_s,
        ee_m,
        ee_s,
        measured_frames.to_string(),
    ]
}

/// Writes per-run rows to any sink.
pub fn write_rows<W: Write>(rows: &[ResultRow], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(ROW_COLUMNS)?;
    for r in rows {
        w.write_record(row_record(r))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes per-point summaries to any sink; `measured_frames` is the
/// post-warm-up horizon shared by every run.
pub fn write_summary<W: Write>(summary: &[SummaryRow], measured_frames: u64, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(SUMMARY_COLUMNS)?;
    for s in summary {
        w.write_record(summary_record(s, measured_frames))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes the per-run CSV to `path`.
pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidConfig("no rows to write".into()));
    }
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_rows(rows, std::io::BufWriter::new(file))
}

/// Writes the summary CSV next to the per-run file and returns its path.
pub fn emit_summary(summary: &[SummaryRow], rows: &[ResultRow], path: &Path) -> Result<PathBuf> {
    let target = summary_path(path);
    let measured = rows.first().map_or(0, |r| r.horizon_frames - r.warmup_frames);
    let file = std::fs::File::create(&target).map_err(|source| Error::Io {
        path: target.clone(),
        source,
    })?;
    write_summary(summary, measured, std::io::BufWriter::new(file))?;
    Ok(target)
}

/// `results.csv` -> `results.summary.csv`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.summary.csv"))
}
