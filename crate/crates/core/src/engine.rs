//! Slot-level simulation of both users over a shared uplink.
//!
//! A run is a single sequential slot loop driven by one ChaCha8 stream
//! selected by `(rng_seed, rng_stream)`, so identical configurations give
//! bit-identical results. In the frame-based model the last slot of every
//! frame carries feedback only; in the idealistic model every slot is an
//! uplink slot and feedback is instantaneous.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::broadband::{self, BlockState, BroadbandPolicy};
use crate::error::{Error, Result};
use crate::phy::{self, BandPlan, LinkGeometry, NoiseModel, OutcomeClass, Scheme, Transmission, User};
use crate::source::{self, CostMatrix, DtmcParams, SamplingPolicy, SourceState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimingModel {
    FrameBased,
    Idealistic,
}

impl TimingModel {
    pub fn as_str(self) -> &'static str {
        match self {
            TimingModel::FrameBased => "frame-based",
            TimingModel::Idealistic => "idealistic",
        }
    }
}

impl std::fmt::Display for TimingModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameConfig {
    pub slots_per_frame: u32,
    pub slot_seconds: f64,
    pub horizon_frames: u64,
}

impl FrameConfig {
    pub fn validate(&self) -> Result<()> {
        if self.slots_per_frame < 2 {
            return Err(Error::invalid(
                "slots_per_frame",
                "needs at least one uplink and one feedback slot",
            ));
        }
        if !(self.slot_seconds > 0.0) {
            return Err(Error::invalid("slot_seconds", "must be positive"));
        }
        if self.horizon_frames < 1 {
            return Err(Error::invalid("horizon_frames", "must be at least 1"));
        }
        Ok(())
    }

    /// Frames discarded before averaging: 1% of the horizon, at least 100.
    pub fn warmup_frames(&self) -> u64 {
        (self.horizon_frames.div_ceil(100)).max(100)
    }

    pub fn uplink_slots(&self) -> u32 {
        self.slots_per_frame - 1
    }
}

/// Broadband traffic settings; the mean channel gain comes from the link
/// geometry at run time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BroadbandSettings {
    pub target_error: f64,
    pub max_rate_bps: f64,
    pub block_size: u32,
    /// Per-slot success probability replacing the PHY for the broadband link.
    pub success_override: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub frame: FrameConfig,
    pub band: BandPlan,
    pub broadband_link: LinkGeometry,
    pub intermittent_link: LinkGeometry,
    pub noise: NoiseModel,
    pub source: DtmcParams,
    pub policy: SamplingPolicy,
    pub costs: CostMatrix,
    pub broadband: BroadbandSettings,
    /// Power budget of both users; the intermittent user always transmits at it.
    pub max_power_w: f64,
    pub packet_bytes: u32,
    pub model: TimingModel,
    /// Per-attempt success probability replacing the PHY for the
    /// intermittent link.
    pub success_override: Option<f64>,
    pub rng_seed: u64,
    pub rng_stream: u64,
}

impl SimConfig {
    pub fn scheme(&self) -> Scheme {
        self.band.scheme()
    }

    pub fn validate(&self) -> Result<()> {
        self.frame.validate()?;
        self.broadband_link.validate()?;
        self.intermittent_link.validate()?;
        self.noise.validate()?;
        self.source.validate()?;
        self.policy.validate()?;
        CostMatrix::new(self.costs.c01, self.costs.c10)?;
        if !(self.max_power_w > 0.0) {
            return Err(Error::invalid("max_power_w", "must be positive"));
        }
        if self.packet_bytes == 0 {
            return Err(Error::invalid("packet_bytes", "must be positive"));
        }
        if self.broadband.block_size == 0 {
            return Err(Error::invalid("block_size", "must be positive"));
        }
        for p in [self.success_override, self.broadband.success_override]
            .into_iter()
            .flatten()
        {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid("success_override", "must be a probability"));
            }
        }
        if self.frame.horizon_frames <= self.frame.warmup_frames() {
            return Err(Error::InvalidConfig(format!(
                "horizon of {} frames does not exceed the {}-frame warm-up",
                self.frame.horizon_frames,
                self.frame.warmup_frames()
            )));
        }
        Ok(())
    }

    /// One packet per slot: `8 L / T_s`.
    pub fn intermittent_rate_bps(&self) -> f64 {
        8.0 * self.packet_bytes as f64 / self.frame.slot_seconds
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IntermittentMetrics {
    pub tare: f64,
    pub tacae: f64,
    /// Retransmissions per delivered update; absent without deliveries.
    pub udc: Option<f64>,
    /// All transmissions.
    pub attempts: u64,
    /// Transmissions of samples triggered by failure feedback.
    pub retransmissions: u64,
    pub deliveries: u64,
    pub measured_slots: u64,
}

impl IntermittentMetrics {
    pub fn success_rate(&self) -> Option<f64> {
        (self.attempts > 0).then(|| self.deliveries as f64 / self.attempts as f64)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BroadbandMetrics {
    /// Absent when the broadband user has no bandwidth.
    pub rate_bps: Option<f64>,
    pub power_w: Option<f64>,
    pub throughput_bps: f64,
    pub energy_efficiency: Option<f64>,
    pub blocks_done: u64,
    /// Mean frames per completed block (slots in the idealistic model).
    pub mean_frames_per_block: Option<f64>,
    pub slot_attempts: u64,
    pub slot_successes: u64,
}

/// Counts of `(broadband, intermittent)` outcome classes in slots where both
/// users transmitted on the shared band. Indexed `[broadband][intermittent]`
/// with `I = 0`, `E = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OverlapTally {
    pub pairs: [[u64; 2]; 2],
}

impl OverlapTally {
    fn record(&mut self, broadband: OutcomeClass, intermittent: OutcomeClass) {
        let idx = |c| match c {
            OutcomeClass::I => 0,
            OutcomeClass::E => 1,
        };
        self.pairs[idx(broadband)][idx(intermittent)] += 1;
    }

    pub fn total(&self) -> u64 {
        self.pairs.iter().flatten().sum()
    }

    /// Fraction of overlapped slots with the intermittent signal recovered:
    /// `(I,I) + (E,I)`.
    pub fn intermittent_success(&self) -> Option<f64> {
        let n = self.total();
        (n > 0).then(|| (self.pairs[0][0] + self.pairs[1][0]) as f64 / n as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub intermittent: IntermittentMetrics,
    pub broadband: BroadbandMetrics,
    pub overlap: OverlapTally,
    /// Transmissions/successes of the intermittent user in measured
    /// overlapped slots, counted from the final decode flags.
    pub overlap_intermittent: (u64, u64),
    pub config: SimConfig,
    pub seed: u64,
}

/// What the receiver sees in one measured slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotRecord {
    pub x: SourceState,
    pub x_hat: SourceState,
}

/// Running count of mismatched slots by direction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ErrorTally {
    pub slots: u64,
    pub zero_as_one: u64,
    pub one_as_zero: u64,
}

impl ErrorTally {
    pub fn record(&mut self, rec: SlotRecord) {
        self.slots += 1;
        match (rec.x, rec.x_hat) {
            (SourceState::Zero, SourceState::One) => self.zero_as_one += 1,
            (SourceState::One, SourceState::Zero) => self.one_as_zero += 1,
            _ => {}
        }
    }

    pub fn tare(&self) -> f64 {
        if self.slots == 0 {
            return 0.0;
        }
        (self.zero_as_one + self.one_as_zero) as f64 / self.slots as f64
    }

    pub fn tacae(&self, costs: &CostMatrix) -> f64 {
        if self.slots == 0 {
            return 0.0;
        }
        (self.zero_as_one as f64 * costs.c01 + self.one_as_zero as f64 * costs.c10) / self.slots as f64
    }
}

/// Time-averaged reconstruction error and actuation cost of a trace.
pub fn accumulate<I: IntoIterator<Item = SlotRecord>>(trace: I, costs: &CostMatrix) -> (f64, f64) {
    let mut tally = ErrorTally::default();
    trace.into_iter().for_each(|r| tally.record(r));
    (tally.tare(), tally.tacae(costs))
}

/// `(attempts - deliveries) / deliveries`, absent when nothing was delivered.
pub fn compute_udc(attempts: u64, deliveries: u64) -> Option<f64> {
    (deliveries > 0).then(|| attempts.saturating_sub(deliveries) as f64 / deliveries as f64)
}

pub fn run(config: &SimConfig) -> Result<RunResult> {
    Simulation::new(config)?.execute(None)
}

pub fn run_frame_based(config: &SimConfig) -> Result<RunResult> {
    if config.model != TimingModel::FrameBased {
        return Err(Error::InvalidConfig(
            "run_frame_based needs the frame-based model".into(),
        ));
    }
    run(config)
}

pub fn run_idealistic(config: &SimConfig) -> Result<RunResult> {
    if config.model != TimingModel::Idealistic {
        return Err(Error::InvalidConfig("run_idealistic needs the idealistic model".into()));
    }
    run(config)
}

/// Like [`run`], also returning the measured slot trace.
pub fn run_traced(config: &SimConfig) -> Result<(RunResult, Vec<SlotRecord>)> {
    let mut trace = Vec::new();
    let result = Simulation::new(config)?.execute(Some(&mut trace))?;
    Ok((result, trace))
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

struct LinkParams {
    beta: f64,
    power_w: f64,
    threshold: f64,
    sigma2_w: f64,
}

struct BroadbandLink {
    link: LinkParams,
    rate_bps: f64,
}

struct Simulation<'a> {
    config: &'a SimConfig,
    intermittent: LinkParams,
    broadband: Option<BroadbandLink>,
}

#[derive(Clone, Copy)]
struct Packet {
    value: SourceState,
    retransmission: bool,
}

impl<'a> Simulation<'a> {
    fn new(config: &'a SimConfig) -> Result<Self> {
        config.validate()?;
        let band = &config.band;

        let im_width = band.user_width(User::Intermittent);
        let intermittent = LinkParams {
            beta: phy::large_scale_gain(&config.intermittent_link)?,
            power_w: config.max_power_w,
            threshold: phy::decode_threshold(config.intermittent_rate_bps(), im_width)?,
            sigma2_w: phy::noise_power(&config.noise, im_width)?,
        };

        let bb_width = band.user_width(User::Broadband);
        let broadband = if bb_width > 0.0 {
            let sigma2_w = phy::noise_power(&config.noise, bb_width)?;
            let policy = BroadbandPolicy {
                target_error: config.broadband.target_error,
                max_rate_bps: config.broadband.max_rate_bps,
                max_power_w: config.max_power_w,
                mean_gain: phy::large_scale_gain(&config.broadband_link)?,
            };
            let rate_bps = broadband::select_rate(&policy, bb_width, sigma2_w)?;
            let power_w = broadband::select_power(&policy, rate_bps, bb_width, sigma2_w)?;
            Some(BroadbandLink {
                link: LinkParams {
                    beta: policy.mean_gain,
                    power_w,
                    threshold: phy::decode_threshold(rate_bps, bb_width)?,
                    sigma2_w,
                },
                rate_bps,
            })
        } else {
            None
        };

        Ok(Simulation {
            config,
            intermittent,
            broadband,
        })
    }

    fn execute(&self, mut trace: Option<&mut Vec<SlotRecord>>) -> Result<RunResult> {
        let cfg = self.config;
        let idealistic = cfg.model == TimingModel::Idealistic;
        let feedback_driven = cfg.policy.uses_feedback();
        let tf = cfg.frame.slots_per_frame as u64;
        let total_slots = cfg.frame.horizon_frames * tf;
        let warmup_slots = cfg.frame.warmup_frames() * tf;
        let scheme = cfg.scheme();

        let mut rng = rng_for(cfg.rng_seed, cfg.rng_stream);

        let mut x = SourceState::Zero;
        let mut x_hat = SourceState::Zero;
        let mut known_error = false;
        let mut queue: Option<Packet> = None;
        let mut last_feedback: Option<bool> = None;

        let mut errors = ErrorTally::default();
        let mut im = IntermittentMetrics::default();
        let mut overlap = OverlapTally::default();
        let mut overlap_im = (0u64, 0u64);

        let mut block = BlockState::new(cfg.broadband.block_size);
        let mut bb_frame_successes = 0u32;
        let mut bb = BroadbandMetrics::default();
        let mut block_frames_sum = 0u64;

        for slot in 0..total_slots {
            let measuring = slot >= warmup_slots;
            let pos = slot % tf;
            let uplink = idealistic || pos < tf - 1;
            let frame_end = !idealistic && pos == tf - 1;

            let x_prev = x;
            x = source::dtmc_step(x, &cfg.source, &mut rng);
            if source::sampling_decision(&cfg.policy, slot, x, x_prev, known_error) {
                queue = Some(Packet {
                    value: x,
                    retransmission: known_error,
                });
                known_error = false;
            }

            let im_packet = if uplink { queue.take() } else { None };
            let bb_link = if uplink { self.broadband.as_ref() } else { None };

            if im_packet.is_some() || bb_link.is_some() {
                let im_tx = im_packet.map(|_| self.transmission(&self.intermittent, &mut rng));
                let bb_tx = bb_link.map(|b| self.transmission(&b.link, &mut rng));
                let mut outcome = match scheme {
                    Scheme::Fdma => phy::decode_fdma_slot(
                        bb_tx.as_ref().map(|t| (t, bb_link.unwrap().link.sigma2_w)),
                        im_tx.as_ref().map(|t| (t, self.intermittent.sigma2_w)),
                    ),
                    Scheme::Noma => phy::decode_noma_slot(bb_tx.as_ref(), im_tx.as_ref(), self.intermittent.sigma2_w),
                };
                if let (Some(p), Some(_)) = (cfg.success_override, im_packet) {
                    let ok = rng.random::<f64>() < p;
                    outcome.intermittent = Some(if ok {
                        phy::Decode::DecodedDirect
                    } else {
                        phy::Decode::Failed
                    });
                }
                if let (Some(p), Some(_)) = (cfg.broadband.success_override, bb_tx.as_ref()) {
                    let ok = rng.random::<f64>() < p;
                    outcome.broadband = Some(if ok {
                        phy::Decode::DecodedDirect
                    } else {
                        phy::Decode::Failed
                    });
                }

                if let Some(pkt) = im_packet {
                    let ok = outcome.intermittent.is_some_and(phy::Decode::is_decoded);
                    if ok {
                        x_hat = source::estimator_update(x_hat, Some(pkt.value));
                    }
                    if measuring {
                        im.attempts += 1;
                        im.retransmissions += pkt.retransmission as u64;
                        im.deliveries += ok as u64;
                        if let Some((b, i)) = outcome.class_pair() {
                            overlap.record(b, i);
                            overlap_im.0 += 1;
                            overlap_im.1 += ok as u64;
                        }
                    }
                    if feedback_driven {
                        if idealistic {
                            known_error = !ok;
                        } else {
                            last_feedback = Some(ok);
                        }
                    }
                }

                if bb_tx.is_some() {
                    let ok = outcome.broadband.is_some_and(phy::Decode::is_decoded);
                    bb_frame_successes += ok as u32;
                    if measuring {
                        bb.slot_attempts += 1;
                        bb.slot_successes += ok as u64;
                    }
                }
            }

            if self.broadband.is_some() && (idealistic || frame_end) {
                let (next, done) = broadband::block_advance(block, bb_frame_successes, true);
                block = next;
                bb_frame_successes = 0;
                if let (Some(frames), true) = (done, measuring) {
                    bb.blocks_done += 1;
                    block_frames_sum += frames;
                }
            }
            if frame_end {
                if let Some(ok) = last_feedback.take() {
                    known_error = !ok;
                }
            }

            if measuring {
                let rec = SlotRecord { x, x_hat };
                errors.record(rec);
                if let Some(t) = trace.as_deref_mut() {
                    t.push(rec);
                }
            }
        }

        im.tare = errors.tare();
        im.tacae = errors.tacae(&cfg.costs);
        im.measured_slots = errors.slots;
        im.udc = compute_udc(im.deliveries + im.retransmissions, im.deliveries);

        if let Some(link) = &self.broadband {
            let (periods, period_slots) = if idealistic {
                (total_slots - warmup_slots, 1)
            } else {
                (
                    cfg.frame.horizon_frames - cfg.frame.warmup_frames(),
                    cfg.frame.slots_per_frame,
                )
            };
            bb.rate_bps = Some(link.rate_bps);
            bb.power_w = Some(link.link.power_w);
            bb.throughput_bps = broadband::throughput(
                bb.blocks_done,
                periods,
                link.rate_bps,
                cfg.broadband.block_size,
                period_slots,
            )?;
            bb.energy_efficiency = Some(broadband::energy_efficiency(bb.throughput_bps, link.link.power_w)?);
            bb.mean_frames_per_block = (bb.blocks_done > 0).then(|| block_frames_sum as f64 / bb.blocks_done as f64);
        }

        Ok(RunResult {
            intermittent: im,
            broadband: bb,
            overlap,
            overlap_intermittent: overlap_im,
            config: cfg.clone(),
            seed: cfg.rng_seed,
        })
    }

    fn transmission(&self, link: &LinkParams, rng: &mut ChaCha8Rng) -> Transmission {
        Transmission {
            gain: phy::draw_fading_power(link.beta, rng),
            power_w: link.power_w,
            threshold: link.threshold,
        }
    }
}
