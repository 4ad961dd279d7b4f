//! Closed-form predictions over the FDMA part of a grid. Nothing here draws
//! random numbers.

use std::io::Write;

use crate::analysis::{self, PolicyEvents};
use crate::broadband::{self, BroadbandPolicy};
use crate::error::Result;
use crate::phy::{self, User};

use super::config::ExperimentSpec;
use super::csv::format_float;
use super::sweep::GridPoint;

/// Predictions at one FDMA `(distance, b2)` point.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticRow {
    pub distance_m: f64,
    pub b2_fraction: f64,
    /// Per-attempt success probability of the intermittent user.
    pub intermittent_success: f64,
    /// Idealistic semantics-aware TARE from the mean-field closed form.
    pub tare_closed_form: f64,
    /// Idealistic semantics-aware TARE/TACAE from the joint `(X, E)` chain;
    /// absent when the chain has no unique stationary law.
    pub tare_chain: Option<f64>,
    pub tacae_chain: Option<f64>,
    /// Broadband link; absent when it has no bandwidth.
    pub broadband: Option<BroadbandPrediction>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BroadbandPrediction {
    pub rate_bps: f64,
    pub power_w: f64,
    pub slot_success: f64,
    pub throughput_bps: f64,
    pub energy_efficiency: f64,
}

pub const ANALYTIC_COLUMNS: [&str; 12] = [
    "distance_m",
    "b2_fraction",
    "intermittent_success",
    "tare_closed_form",
    "tare_chain",
    "tacae_chain",
    "bb_rate_bps",
    "bb_power_w",
    "bb_slot_success",
    "throughput_bps",
    "energy_efficiency",
    "expected_frames_per_block",
];

/// One row per FDMA `(distance, b2)` pair of the sweep grid.
pub fn analytic_rows(spec: &ExperimentSpec) -> Result<Vec<AnalyticRow>> {
    let mut rows = Vec::new();
    for &distance_m in &spec.sweep.distances_m {
        for &b2 in &spec.sweep.b2_fractions {
            let point = GridPoint {
                scheme: phy::Scheme::Fdma,
                model: spec.base.model,
                distance_m,
                b2_fraction: Some(b2),
            };
            rows.push(predict(spec, &point)?);
        }
    }
    rows.sort_by(|a, b| {
        a.distance_m
            .total_cmp(&b.distance_m)
            .then(a.b2_fraction.total_cmp(&b.b2_fraction))
    });
    Ok(rows)
}

fn predict(spec: &ExperimentSpec, point: &GridPoint) -> Result<AnalyticRow> {
    let cfg = point.configure(&spec.base, spec.master_seed, 0)?;
    let b2_hz = cfg.band.user_width(User::Intermittent);
    let p2 = match cfg.success_override {
        Some(p) => p,
        None => analysis::fdma_intermittent_success(
            &cfg.intermittent_link,
            &cfg.noise,
            b2_hz,
            cfg.intermittent_rate_bps(),
            cfg.max_power_w,
        )?,
    };
    let src = cfg.source;
    let chain = analysis::build_joint_chain(&src, &PolicyEvents::idealistic_semantics_aware(p2))?;
    let metrics = analysis::chain_metrics(&chain, &cfg.costs).ok();

    let b1_hz = cfg.band.user_width(User::Broadband);
    let broadband = if b1_hz > 0.0 {
        let sigma2 = phy::noise_power(&cfg.noise, b1_hz)?;
        let policy = BroadbandPolicy {
            target_error: cfg.broadband.target_error,
            max_rate_bps: cfg.broadband.max_rate_bps,
            max_power_w: cfg.max_power_w,
            mean_gain: phy::large_scale_gain(&cfg.broadband_link)?,
        };
        let rate_bps = broadband::select_rate(&policy, b1_hz, sigma2)?;
        let power_w = broadband::select_power(&policy, rate_bps, b1_hz, sigma2)?;
        let slot_success = cfg.broadband.success_override.unwrap_or_else(|| {
            let gamma = phy::decode_threshold(rate_bps, b1_hz).unwrap_or(f64::INFINITY);
            phy::closed_form_success_prob(policy.mean_gain, power_w, sigma2, gamma)
        });
        let throughput_bps = if slot_success > 0.0 {
            analysis::predicted_throughput(
                rate_bps,
                cfg.broadband.block_size,
                slot_success,
                cfg.frame.slots_per_frame,
            )?
        } else {
            0.0
        };
        Some(BroadbandPrediction {
            rate_bps,
            power_w,
            slot_success,
            throughput_bps,
            energy_efficiency: broadband::energy_efficiency(throughput_bps, power_w)?,
        })
    } else {
        None
    };

    Ok(AnalyticRow {
        distance_m: point.distance_m,
        b2_fraction: point.b2_fraction.unwrap_or(1.0),
        intermittent_success: p2,
        tare_closed_form: analysis::tare_idealistic_closed_form(src.p_s, src.q_s, p2)?,
        tare_chain: metrics.map(|m| m.tare),
        tacae_chain: metrics.map(|m| m.tacae),
        broadband,
    })
}

pub fn write_analytic<W: Write>(rows: &[AnalyticRow], spec: &ExperimentSpec, sink: W) -> Result<()> {
    let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(ANALYTIC_COLUMNS)?;
    for r in rows {
        let bb = r.broadband;
        let frames = bb.and_then(|b| {
            analysis::expected_frames(
                spec.base.broadband.block_size,
                b.slot_success,
                spec.base.frame.slots_per_frame,
            )
            .ok()
        });
        w.write_record([
            format_float(r.distance_m),
            format_float(r.b2_fraction),
            format_float(r.intermittent_success),
            format_float(r.tare_closed_form),
            opt(r.tare_chain),
            opt(r.tacae_chain),
            opt(bb.map(|b| b.rate_bps)),
            opt(bb.map(|b| b.power_w)),
            opt(bb.map(|b| b.slot_success)),
            opt(bb.map(|b| b.throughput_bps)),
            opt(bb.map(|b| b.energy_efficiency)),
            opt(frames),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
