//! Experiment configuration files.
//!
//! The grammar is a TOML subset: `[section]` headers followed by
//! `key = value` lines, `#` comments, and arrays only under `[sweep]`.
//! Every key is optional; omitted keys take the reference values listed in
//! [`ExperimentSpec::reference`]. Unknown sections or keys are rejected, and
//! every error carries the 1-based line it was detected on.
//!
//! ```toml
//! [run]
//! model = "frame-based"        # frame-based | idealistic
//! frames = 100000              # horizon per run, warm-up included
//! seed = 1
//! replications = 10
//! output = "results.csv"
//!
//! [frame]
//! slots_per_frame = 10
//! slot_seconds = 0.001
//!
//! [system]
//! bandwidth_hz = 1e6
//! carrier_hz = 2e9
//! pathloss_exponent = 2.6
//! antenna_gain = 10.0
//! noise_temperature_k = 190.0
//! noise_figure_db = 5.0
//! max_power_w = 0.2
//!
//! [access]
//! scheme = "FDMA"              # FDMA | NOMA
//! b2 = 0.4                     # intermittent share of the band (FDMA only)
//!
//! [broadband]
//! distance_m = 50.0
//! target_error = 0.1
//! max_rate_bps = 5e6
//! block_size = 32
//! success_override = 1.0       # optional; bypasses the PHY for this link
//!
//! [intermittent]
//! distance_m = 400.0
//! packet_bytes = 128
//! p_s = 0.1
//! q_s = 0.15
//! policy = "semantics-aware"   # semantics-aware | change-aware | uniform
//! uniform_period = 10          # uniform only
//! cost_01 = 5.0                # source 0, estimate 1
//! cost_10 = 1.0                # source 1, estimate 0
//! success_override = 0.62      # optional; bypasses the PHY for this link
//!
//! [sweep]
//! b2 = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
//! distance_m = [100.0, 200.0, 400.0]
//! scheme = ["FDMA", "NOMA"]
//! model = ["frame-based", "idealistic"]
//! ```

use std::fmt::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::engine::{BroadbandSettings, FrameConfig, SimConfig, TimingModel};
use crate::error::{Error, Result};
use crate::phy::{BandPlan, LinkGeometry, NoiseModel, Scheme};
use crate::source::{CostMatrix, DtmcParams, SamplingPolicy};

pub const REFERENCE_B2_GRID: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
pub const REFERENCE_DISTANCES_M: [f64; 3] = [100.0, 200.0, 400.0];

/// Grid axes; every combination is one grid point, except that NOMA ignores
/// the `b2` axis.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxes {
    pub b2_fractions: Vec<f64>,
    pub distances_m: Vec<f64>,
    pub schemes: Vec<Scheme>,
    pub models: Vec<TimingModel>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    /// Single-run configuration; also the template for every grid point.
    pub base: SimConfig,
    /// Intermittent share of the band used by `base` when it is FDMA.
    pub base_b2_fraction: f64,
    pub sweep: SweepAxes,
    pub replications: u32,
    pub master_seed: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Reference parameters: 1 MHz at 2 GHz, T_F = 10 slots of 1 ms, K = 32,
    /// L = 128 B, target error 0.1, 5 Mb/s cap, 200 mW, C01 = 5, C10 = 1,
    /// broadband user at 50 m, intermittent user at 400 m with B2 = 0.4 B,
    /// slow source (0.1, 0.15), semantics-aware sampling, 10^5 frames.
    pub fn reference() -> Self {
        let total_hz = 1e6;
        let b2 = 0.4;
        let link = |distance_m| LinkGeometry {
            distance_m,
            carrier_hz: 2e9,
            pathloss_exp: 2.6,
            antenna_gain_product: 10.0,
        };
        let base = SimConfig {
            frame: FrameConfig {
                slots_per_frame: 10,
                slot_seconds: 1e-3,
                horizon_frames: 100_000,
            },
            band: BandPlan::fdma(total_hz, b2 * total_hz).expect("reference band plan"),
            broadband_link: link(50.0),
            intermittent_link: link(400.0),
            noise: NoiseModel {
                noise_temp_k: 190.0,
                noise_figure_db: 5.0,
            },
            source: DtmcParams { p_s: 0.1, q_s: 0.15 },
            policy: SamplingPolicy::SemanticsAware,
            costs: CostMatrix { c01: 5.0, c10: 1.0 },
            broadband: BroadbandSettings {
                target_error: 0.1,
                max_rate_bps: 5e6,
                block_size: 32,
                success_override: None,
            },
            max_power_w: 0.2,
            packet_bytes: 128,
            model: TimingModel::FrameBased,
            success_override: None,
            rng_seed: 1,
            rng_stream: 0,
        };
        ExperimentSpec {
            base,
            base_b2_fraction: b2,
            sweep: SweepAxes {
                b2_fractions: REFERENCE_B2_GRID.to_vec(),
                distances_m: REFERENCE_DISTANCES_M.to_vec(),
                schemes: vec![Scheme::Fdma, Scheme::Noma],
                models: vec![TimingModel::FrameBased, TimingModel::Idealistic],
            },
            replications: 10,
            master_seed: 1,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.replications < 1 {
            return Err(Error::InvalidConfig("replications must be at least 1".into()));
        }
        let s = &self.sweep;
        if s.b2_fractions.is_empty() || s.distances_m.is_empty() || s.schemes.is_empty() || s.models.is_empty() {
            return Err(Error::InvalidConfig("every sweep axis needs at least one value".into()));
        }
        if let Some(b) = s.b2_fractions.iter().find(|b| !(**b > 0.0 && **b <= 1.0)) {
            return Err(Error::InvalidConfig(format!("sweep b2 value {b} is outside (0, 1]")));
        }
        if let Some(d) = s.distances_m.iter().find(|d| !(**d > 0.0)) {
            return Err(Error::InvalidConfig(format!("sweep distance {d} must be positive")));
        }
        Ok(())
    }

    /// Serialises the spec in the file grammar; parsing the result gives back
    /// an equal spec.
    pub fn to_config_string(&self) -> String {
        let b = &self.base;
        let mut out = String::new();
        let f = |v: f64| format!("{v:?}");
        let list = |vals: &[f64]| vals.iter().map(|v| f(*v)).collect::<Vec<_>>().join(", ");
        let strs = |vals: Vec<&str>| vals.iter().map(|v| format!("\"{v}\"")).collect::<Vec<_>>().join(", ");

        let _ = writeln!(out, "[run]");
        let _ = writeln!(out, "model = \"{}\"", b.model);
        let _ = writeln!(out, "frames = {}", b.frame.horizon_frames);
        let _ = writeln!(out, "seed = {}", self.master_seed);
        let _ = writeln!(out, "replications = {}", self.replications);
        if let Some(p) = &self.output {
            let _ = writeln!(out, "output = {:?}", p.display().to_string());
        }
        let _ = writeln!(out, "\n[frame]");
        let _ = writeln!(out, "slots_per_frame = {}", b.frame.slots_per_frame);
        let _ = writeln!(out, "slot_seconds = {}", f(b.frame.slot_seconds));
        let _ = writeln!(out, "\n[system]");
        let _ = writeln!(out, "bandwidth_hz = {}", f(b.band.total_hz()));
        let _ = writeln!(out, "carrier_hz = {}", f(b.intermittent_link.carrier_hz));
        let _ = writeln!(out, "pathloss_exponent = {}", f(b.intermittent_link.pathloss_exp));
        let _ = writeln!(out, "antenna_gain = {}", f(b.intermittent_link.antenna_gain_product));
        let _ = writeln!(out, "noise_temperature_k = {}", f(b.noise.noise_temp_k));
        let _ = writeln!(out, "noise_figure_db = {}", f(b.noise.noise_figure_db));
        let _ = writeln!(out, "max_power_w = {}", f(b.max_power_w));
        let _ = writeln!(out, "\n[access]");
        let _ = writeln!(out, "scheme = \"{}\"", b.scheme());
        if b.scheme() == Scheme::Fdma {
            let _ = writeln!(out, "b2 = {}", f(self.base_b2_fraction));
        }
        let _ = writeln!(out, "\n[broadband]");
        let _ = writeln!(out, "distance_m = {}", f(b.broadband_link.distance_m));
        let _ = writeln!(out, "target_error = {}", f(b.broadband.target_error));
        let _ = writeln!(out, "max_rate_bps = {}", f(b.broadband.max_rate_bps));
        let _ = writeln!(out, "block_size = {}", b.broadband.block_size);
        if let Some(p) = b.broadband.success_override {
            let _ = writeln!(out, "success_override = {}", f(p));
        }
        let _ = writeln!(out, "\n[intermittent]");
        let _ = writeln!(out, "distance_m = {}", f(b.intermittent_link.distance_m));
        let _ = writeln!(out, "packet_bytes = {}", b.packet_bytes);
        let _ = writeln!(out, "p_s = {}", f(b.source.p_s));
        let _ = writeln!(out, "q_s = {}", f(b.source.q_s));
        let _ = writeln!(out, "policy = \"{}\"", b.policy.name());
        if let SamplingPolicy::Uniform { period } = b.policy {
            let _ = writeln!(out, "uniform_period = {period}");
        }
        let _ = writeln!(out, "cost_01 = {}", f(b.costs.c01));
        let _ = writeln!(out, "cost_10 = {}", f(b.costs.c10));
        if let Some(p) = b.success_override {
            let _ = writeln!(out, "success_override = {}", f(p));
        }
        let _ = writeln!(out, "\n[sweep]");
        let _ = writeln!(out, "b2 = [{}]", list(&self.sweep.b2_fractions));
        let _ = writeln!(out, "distance_m = [{}]", list(&self.sweep.distances_m));
        let _ = writeln!(
            out,
            "scheme = [{}]",
            strs(self.sweep.schemes.iter().map(|s| s.as_str()).collect())
        );
        let _ = writeln!(
            out,
            "model = [{}]",
            strs(self.sweep.models.iter().map(|m| m.as_str()).collect())
        );
        out
    }
}

type Field<T> = Option<Spanned<T>>;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    run: Option<RawRun>,
    frame: Option<RawFrame>,
    system: Option<RawSystem>,
    access: Option<RawAccess>,
    broadband: Option<RawBroadband>,
    intermittent: Option<RawIntermittent>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    model: Field<String>,
    frames: Field<i64>,
    seed: Field<i64>,
    replications: Field<i64>,
    output: Field<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    slots_per_frame: Field<i64>,
    slot_seconds: Field<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    bandwidth_hz: Field<f64>,
    carrier_hz: Field<f64>,
    pathloss_exponent: Field<f64>,
    antenna_gain: Field<f64>,
    noise_temperature_k: Field<f64>,
    noise_figure_db: Field<f64>,
    max_power_w: Field<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAccess {
    scheme: Field<String>,
    b2: Field<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBroadband {
    distance_m: Field<f64>,
    target_error: Field<f64>,
    max_rate_bps: Field<f64>,
    block_size: Field<i64>,
    success_override: Field<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntermittent {
    distance_m: Field<f64>,
    packet_bytes: Field<i64>,
    p_s: Field<f64>,
    q_s: Field<f64>,
    policy: Field<String>,
    uniform_period: Field<i64>,
    cost_01: Field<f64>,
    cost_10: Field<f64>,
    success_override: Field<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    b2: Field<Vec<f64>>,
    distance_m: Field<Vec<f64>>,
    scheme: Field<Vec<String>>,
    model: Field<Vec<String>>,
}

/// Maps byte offsets in the source text to 1-based line numbers.
struct Lines<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Lines<'_> {
    fn line_of(&self, offset: usize) -> usize {
        let end = offset.min(self.text.len());
        self.text.as_bytes()[..end].iter().filter(|b| **b == b'\n').count() + 1
    }

    fn error(&self, span: Range<usize>, message: impl Into<String>) -> Error {
        Error::Config {
            path: self.path.to_path_buf(),
            line: self.line_of(span.start),
            message: message.into(),
        }
    }
}

/// Reads and validates an experiment file.
pub fn parse_config(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text, path)
}

/// Parses experiment text; `origin` is only used in diagnostics.
pub fn parse_config_str(text: &str, origin: &Path) -> Result<ExperimentSpec> {
    let lines = Lines { path: origin, text };
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(1, |s| lines.line_of(s.start));
        Error::Config {
            path: origin.to_path_buf(),
            line,
            message: e.message().to_string(),
        }
    })?;
    build(raw, &lines)
}

fn take<T: Clone>(field: &Field<T>, default: T) -> (T, Range<usize>) {
    match field {
        Some(s) => (s.get_ref().clone(), s.span()),
        None => (default, 0..0),
    }
}

fn build(raw: RawFile, lines: &Lines<'_>) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::reference();
    let reference = spec.base.clone();

    // Wrap a parameter error with the line of the key that produced it.
    let check =
        |res: Result<()>, span: Range<usize>| -> Result<()> { res.map_err(|e| lines.error(span, e.to_string())) };
    let positive_int = |v: i64, span: Range<usize>, name: &str| -> Result<u64> {
        if v < 1 {
            return Err(lines.error(span, format!("`{name}` must be a positive integer")));
        }
        Ok(v as u64)
    };

    let run = raw.run.unwrap_or_default();
    let (model, span) = take(&run.model, reference.model.as_str().to_string());
    spec.base.model = parse_model(&model).ok_or_else(|| lines.error(span, format!("unknown model `{model}`")))?;
    let (frames, span) = take(&run.frames, reference.frame.horizon_frames as i64);
    spec.base.frame.horizon_frames = positive_int(frames, span.clone(), "frames")?;
    let frames_span = span;
    let (seed, span) = take(&run.seed, spec.master_seed as i64);
    if seed < 0 {
        return Err(lines.error(span, "`seed` must be non-negative"));
    }
    spec.master_seed = seed as u64;
    spec.base.rng_seed = seed as u64;
    let (reps, span) = take(&run.replications, spec.replications as i64);
    spec.replications = u32::try_from(positive_int(reps, span.clone(), "replications")?)
        .map_err(|_| lines.error(span, "`replications` is too large"))?;
    spec.output = run.output.map(|s| PathBuf::from(s.into_inner()));

    let frame = raw.frame.unwrap_or_default();
    let (tf, span) = take(&frame.slots_per_frame, reference.frame.slots_per_frame as i64);
    if !(2..=u32::MAX as i64).contains(&tf) {
        return Err(lines.error(span, "`slots_per_frame` must be at least 2"));
    }
    spec.base.frame.slots_per_frame = tf as u32;
    let (ts, span) = take(&frame.slot_seconds, reference.frame.slot_seconds);
    spec.base.frame.slot_seconds = ts;
    check(spec.base.frame.validate(), span)?;
    if spec.base.frame.horizon_frames <= spec.base.frame.warmup_frames() {
        return Err(lines.error(
            frames_span,
            format!(
                "`frames` must exceed the {}-frame warm-up",
                spec.base.frame.warmup_frames()
            ),
        ));
    }

    let sys = raw.system.unwrap_or_default();
    let (total_hz, total_span) = take(&sys.bandwidth_hz, reference.band.total_hz());
    if !(total_hz > 0.0) {
        return Err(lines.error(total_span, "`bandwidth_hz` must be positive"));
    }
    let (carrier, carrier_span) = take(&sys.carrier_hz, reference.intermittent_link.carrier_hz);
    let (eta, eta_span) = take(&sys.pathloss_exponent, reference.intermittent_link.pathloss_exp);
    let (gain, gain_span) = take(&sys.antenna_gain, reference.intermittent_link.antenna_gain_product);
    for link in [&mut spec.base.broadband_link, &mut spec.base.intermittent_link] {
        link.carrier_hz = carrier;
        link.pathloss_exp = eta;
        link.antenna_gain_product = gain;
    }
    let geom_err = |name: &str| -> Option<Range<usize>> {
        match name {
            "carrier_hz" => Some(carrier_span.clone()),
            "pathloss_exp" => Some(eta_span.clone()),
            "antenna_gain_product" => Some(gain_span.clone()),
            _ => None,
        }
    };
    if let Err(Error::InvalidParameter { name, reason }) = spec.base.intermittent_link.validate() {
        if let Some(span) = geom_err(name) {
            return Err(lines.error(span, format!("`{name}` {reason}")));
        }
    }
    let (temp, span) = take(&sys.noise_temperature_k, reference.noise.noise_temp_k);
    spec.base.noise.noise_temp_k = temp;
    let (nf, nf_span) = take(&sys.noise_figure_db, reference.noise.noise_figure_db);
    spec.base.noise.noise_figure_db = nf;
    check(spec.base.noise.validate(), if temp > 0.0 { nf_span } else { span })?;
    let (pmax, span) = take(&sys.max_power_w, reference.max_power_w);
    if !(pmax > 0.0) {
        return Err(lines.error(span, "`max_power_w` must be positive"));
    }
    spec.base.max_power_w = pmax;

    let access = raw.access.unwrap_or_default();
    let (scheme, span) = take(&access.scheme, reference.scheme().as_str().to_string());
    let scheme = parse_scheme(&scheme).ok_or_else(|| lines.error(span, format!("unknown scheme `{scheme}`")))?;
    match (scheme, &access.b2) {
        (Scheme::Noma, Some(b2)) => {
            return Err(lines.error(b2.span(), "NOMA shares the whole band; `b2` is not allowed"));
        }
        (Scheme::Noma, None) => {
            spec.base.band = BandPlan::noma(total_hz).map_err(|e| lines.error(total_span.clone(), e.to_string()))?;
        }
        (Scheme::Fdma, _) => {
            let (b2, span) = take(&access.b2, spec.base_b2_fraction);
            if !(b2 > 0.0 && b2 <= 1.0) {
                return Err(lines.error(span, "`b2` must lie in (0, 1]"));
            }
            spec.base_b2_fraction = b2;
            spec.base.band = BandPlan::fdma(total_hz, b2 * total_hz).map_err(|e| lines.error(span, e.to_string()))?;
        }
    }

    let bb = raw.broadband.unwrap_or_default();
    let (d, span) = take(&bb.distance_m, reference.broadband_link.distance_m);
    spec.base.broadband_link.distance_m = d;
    check(spec.base.broadband_link.validate(), span)?;
    let (eps, span) = take(&bb.target_error, reference.broadband.target_error);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(lines.error(span, "`target_error` must lie in (0, 1)"));
    }
    spec.base.broadband.target_error = eps;
    let (rmax, span) = take(&bb.max_rate_bps, reference.broadband.max_rate_bps);
    if !(rmax > 0.0) {
        return Err(lines.error(span, "`max_rate_bps` must be positive"));
    }
    spec.base.broadband.max_rate_bps = rmax;
    let (k, span) = take(&bb.block_size, reference.broadband.block_size as i64);
    spec.base.broadband.block_size = u32::try_from(positive_int(k, span.clone(), "block_size")?)
        .map_err(|_| lines.error(span, "`block_size` is too large"))?;
    if let Some(p) = &bb.success_override {
        let v = *p.get_ref();
        if !(0.0..=1.0).contains(&v) {
            return Err(lines.error(p.span(), "`success_override` must lie in [0, 1]"));
        }
        spec.base.broadband.success_override = Some(v);
    }

    let im = raw.intermittent.unwrap_or_default();
    let (d, span) = take(&im.distance_m, reference.intermittent_link.distance_m);
    spec.base.intermittent_link.distance_m = d;
    check(spec.base.intermittent_link.validate(), span)?;
    let (l, span) = take(&im.packet_bytes, reference.packet_bytes as i64);
    spec.base.packet_bytes = u32::try_from(positive_int(l, span.clone(), "packet_bytes")?)
        .map_err(|_| lines.error(span, "`packet_bytes` is too large"))?;
    let (p_s, span) = take(&im.p_s, reference.source.p_s);
    check(DtmcParams::new(p_s, 0.5).map(drop), span)?;
    let (q_s, span) = take(&im.q_s, reference.source.q_s);
    check(DtmcParams::new(0.5, q_s).map(drop), span)?;
    spec.base.source = DtmcParams { p_s, q_s };

    let (policy, policy_span) = take(&im.policy, reference.policy.name().to_string());
    spec.base.policy = match policy.as_str() {
        "semantics-aware" => SamplingPolicy::SemanticsAware,
        "change-aware" => SamplingPolicy::ChangeAware,
        "uniform" => {
            let (period, span) = take(&im.uniform_period, 10);
            SamplingPolicy::Uniform {
                period: positive_int(period, span, "uniform_period")?,
            }
        }
        other => return Err(lines.error(policy_span, format!("unknown policy `{other}`"))),
    };
    if let (Some(p), false) = (
        &im.uniform_period,
        matches!(spec.base.policy, SamplingPolicy::Uniform { .. }),
    ) {
        return Err(lines.error(p.span(), "`uniform_period` only applies to the uniform policy"));
    }
    let (c01, span01) = take(&im.cost_01, reference.costs.c01);
    let (c10, span10) = take(&im.cost_10, reference.costs.c10);
    check(CostMatrix::new(c01, 0.0).map(drop), span01)?;
    check(CostMatrix::new(0.0, c10).map(drop), span10)?;
    spec.base.costs = CostMatrix { c01, c10 };
    if let Some(p) = &im.success_override {
        let v = *p.get_ref();
        if !(0.0..=1.0).contains(&v) {
            return Err(lines.error(p.span(), "`success_override` must lie in [0, 1]"));
        }
        spec.base.success_override = Some(v);
    }

    let sweep = raw.sweep.unwrap_or_default();
    if let Some(v) = &sweep.b2 {
        if v.get_ref().is_empty() || v.get_ref().iter().any(|b| !(*b > 0.0 && *b <= 1.0)) {
            return Err(lines.error(v.span(), "sweep `b2` needs values in (0, 1]"));
        }
        spec.sweep.b2_fractions = v.get_ref().clone();
    }
    if let Some(v) = &sweep.distance_m {
        if v.get_ref().is_empty() || v.get_ref().iter().any(|d| !(*d > 0.0)) {
            return Err(lines.error(v.span(), "sweep `distance_m` needs positive values"));
        }
        spec.sweep.distances_m = v.get_ref().clone();
    }
    if let Some(v) = &sweep.scheme {
        let parsed: Option<Vec<_>> = v.get_ref().iter().map(|s| parse_scheme(s)).collect();
        match parsed {
            Some(p) if !p.is_empty() => spec.sweep.schemes = p,
            _ => return Err(lines.error(v.span(), "sweep `scheme` needs FDMA and/or NOMA")),
        }
    }
    if let Some(v) = &sweep.model {
        let parsed: Option<Vec<_>> = v.get_ref().iter().map(|s| parse_model(s)).collect();
        match parsed {
            Some(p) if !p.is_empty() => spec.sweep.models = p,
            _ => return Err(lines.error(v.span(), "sweep `model` needs frame-based and/or idealistic")),
        }
    }

    spec.validate()?;
    Ok(spec)
}

pub fn parse_scheme(s: &str) -> Option<Scheme> {
    match s {
        "FDMA" | "fdma" => Some(Scheme::Fdma),
        "NOMA" | "noma" => Some(Scheme::Noma),
        _ => None,
    }
}

pub fn parse_model(s: &str) -> Option<TimingModel> {
    match s {
        "frame-based" => Some(TimingModel::FrameBased),
        "idealistic" => Some(TimingModel::Idealistic),
        _ => None,
    }
}
