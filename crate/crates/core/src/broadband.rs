//! Broadband user: rate and power selection from statistical channel
//! knowledge, ideal rateless block delivery and the throughput/energy
//! efficiency that follow.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BroadbandPolicy {
    /// Target per-packet error probability without interference.
    pub target_error: f64,
    pub max_rate_bps: f64,
    pub max_power_w: f64,
    /// Mean channel gain `E|h|^2` known to the user.
    pub mean_gain: f64,
}

impl BroadbandPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_error > 0.0 && self.target_error < 1.0) {
            return Err(Error::invalid("target_error", "must lie in (0, 1)"));
        }
        if !(self.max_rate_bps > 0.0) {
            return Err(Error::invalid("max_rate_bps", "must be positive"));
        }
        if !(self.max_power_w > 0.0) {
            return Err(Error::invalid("max_power_w", "must be positive"));
        }
        if !(self.mean_gain > 0.0) {
            return Err(Error::invalid("mean_gain", "must be positive"));
        }
        Ok(())
    }

    /// `ln(1 / (1 - eps))`: the normalised SNR margin at which Rayleigh
    /// fading gives exactly the target error probability.
    fn fading_margin(&self) -> f64 {
        -(-self.target_error).ln_1p()
    }
}

/// Highest rate (capped at the maximum) that meets the target error
/// probability at full power.
pub fn select_rate(policy: &BroadbandPolicy, subband_hz: f64, sigma2_w: f64) -> Result<f64> {
    policy.validate()?;
    if !(subband_hz > 0.0) {
        return Err(Error::InfeasibleLink);
    }
    let snr = policy.max_power_w * policy.mean_gain * policy.fading_margin() / sigma2_w;
    let achievable = subband_hz * snr.ln_1p() / std::f64::consts::LN_2;
    if !(achievable > 0.0) {
        return Err(Error::InfeasibleLink);
    }
    Ok(achievable.min(policy.max_rate_bps))
}

/// Power that hits the target error probability at `rate_bps`, clamped to the
/// maximum.
pub fn select_power(policy: &BroadbandPolicy, rate_bps: f64, subband_hz: f64, sigma2_w: f64) -> Result<f64> {
    policy.validate()?;
    let gamma_min = crate::phy::decode_threshold(rate_bps, subband_hz)?;
    let required = gamma_min * sigma2_w / (policy.mean_gain * policy.fading_margin());
    Ok(required.min(policy.max_power_w))
}

/// Progress of the rateless block currently in flight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockState {
    pub block_size: u32,
    pub received: u32,
    /// Frames spent on this block so far, counting the current one.
    pub frames_elapsed: u64,
}

impl BlockState {
    pub fn new(block_size: u32) -> Self {
        BlockState {
            block_size,
            received: 0,
            frames_elapsed: 1,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.received >= self.block_size
    }
}

/// Adds `slot_successes` packets (excess beyond the block size is dropped).
/// Completion is only acknowledged at a frame end; then the returned state is
/// a fresh block and the second element carries the frames the block took.
pub fn block_advance(mut state: BlockState, slot_successes: u32, frame_ended: bool) -> (BlockState, Option<u64>) {
    state.received = state.received.saturating_add(slot_successes).min(state.block_size);
    if !frame_ended {
        return (state, None);
    }
    if state.is_complete() {
        (BlockState::new(state.block_size), Some(state.frames_elapsed))
    } else {
        state.frames_elapsed += 1;
        (state, None)
    }
}

/// Long-run throughput from completed blocks over `frames_total` frames of
/// `frame_slots` slots, one packet per slot at `rate_bps`.
pub fn throughput(
    blocks_done: u64,
    frames_total: u64,
    rate_bps: f64,
    block_size: u32,
    frame_slots: u32,
) -> Result<f64> {
    if frames_total == 0 {
        return Err(Error::invalid("frames_total", "must be positive"));
    }
    Ok(rate_bps * block_size as f64 * blocks_done as f64 / (frames_total as f64 * frame_slots as f64))
}

pub fn energy_efficiency(throughput_bps: f64, power_w: f64) -> Result<f64> {
    if !(power_w > 0.0) {
        return Err(Error::UndefinedRatio("broadband transmit power is zero"));
    }
    Ok(throughput_bps / power_w)
}
