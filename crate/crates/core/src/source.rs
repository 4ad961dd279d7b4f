//! Two-state Markov source, the receiver-side estimate and the sampling
//! policies that decide when the device generates an update.

use rand::Rng;

use crate::error::{Error, Result};

/// Flip probabilities of the binary source: `p_s` for 0 -> 1, `q_s` for 1 -> 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DtmcParams {
    pub p_s: f64,
    pub q_s: f64,
}

impl DtmcParams {
    /// Ergodic parameters (both flip probabilities strictly inside (0, 1)).
    pub fn new(p_s: f64, q_s: f64) -> Result<Self> {
        let params = DtmcParams { p_s, q_s };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p_s", self.p_s), ("q_s", self.q_s)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(name, format!("{v} is outside (0, 1)")));
            }
        }
        Ok(())
    }

    pub fn flip_prob(&self, state: SourceState) -> f64 {
        match state {
            SourceState::Zero => self.p_s,
            SourceState::One => self.q_s,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SourceState {
    #[default]
    Zero,
    One,
}

impl SourceState {
    pub fn flipped(self) -> Self {
        match self {
            SourceState::Zero => SourceState::One,
            SourceState::One => SourceState::Zero,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            SourceState::Zero
        } else {
            SourceState::One
        }
    }
}

/// One source transition. Flip probabilities are not validated here so that
/// the degenerate values 0 and 1 can be exercised directly.
pub fn dtmc_step<R: Rng + ?Sized>(state: SourceState, params: &DtmcParams, rng: &mut R) -> SourceState {
    if rng.random::<f64>() < params.flip_prob(state) {
        state.flipped()
    } else {
        state
    }
}

/// Stationary probabilities of states 0 and 1.
pub fn dtmc_stationary(params: &DtmcParams) -> Result<(f64, f64)> {
    params.validate()?;
    let total = params.p_s + params.q_s;
    Ok((params.q_s / total, params.p_s / total))
}

/// Receiver estimate and the error indicator it implies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReconstructionState {
    pub x_hat: SourceState,
    pub error: bool,
}

impl ReconstructionState {
    pub fn observe(x: SourceState, x_hat: SourceState) -> Self {
        ReconstructionState {
            x_hat,
            error: x != x_hat,
        }
    }
}

/// The estimate takes the content of a delivered update, otherwise holds.
pub fn estimator_update(x_hat_prev: SourceState, delivered: Option<SourceState>) -> SourceState {
    delivered.unwrap_or(x_hat_prev)
}

/// Actuation cost of each mismatch direction; matching states cost nothing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostMatrix {
    /// Source in 0, estimate in 1.
    pub c01: f64,
    /// Source in 1, estimate in 0.
    pub c10: f64,
}

impl CostMatrix {
    pub const UNIT: CostMatrix = CostMatrix { c01: 1.0, c10: 1.0 };

    pub fn new(c01: f64, c10: f64) -> Result<Self> {
        if !(c01 >= 0.0) || !c01.is_finite() {
            return Err(Error::invalid("c01", "must be finite and non-negative"));
        }
        if !(c10 >= 0.0) || !c10.is_finite() {
            return Err(Error::invalid("c10", "must be finite and non-negative"));
        }
        Ok(CostMatrix { c01, c10 })
    }

    pub fn max(&self) -> f64 {
        self.c01.max(self.c10)
    }
}

pub fn slot_cost(x: SourceState, x_hat: SourceState, costs: &CostMatrix) -> f64 {
    match (x, x_hat) {
        (SourceState::Zero, SourceState::One) => costs.c01,
        (SourceState::One, SourceState::Zero) => costs.c10,
        _ => 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingPolicy {
    /// Sample on a state change or while the device knows the receiver is wrong.
    SemanticsAware,
    /// Sample on a state change only.
    ChangeAware,
    /// Sample every `period` slots, starting at slot 0.
    Uniform { period: u64 },
}

impl SamplingPolicy {
    pub fn validate(&self) -> Result<()> {
        if let SamplingPolicy::Uniform { period } = self {
            if *period < 1 {
                return Err(Error::invalid("uniform_period", "must be at least 1"));
            }
        }
        Ok(())
    }

    pub fn uses_feedback(&self) -> bool {
        matches!(self, SamplingPolicy::SemanticsAware)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SamplingPolicy::SemanticsAware => "semantics-aware",
            SamplingPolicy::ChangeAware => "change-aware",
            SamplingPolicy::Uniform { .. } => "uniform",
        }
    }
}

/// Whether to generate a sample in slot `slot`. `known_error` must come from
/// feedback the device actually received.
pub fn sampling_decision(
    policy: &SamplingPolicy,
    slot: u64,
    x_now: SourceState,
    x_prev: SourceState,
    known_error: bool,
) -> bool {
    match policy {
        SamplingPolicy::SemanticsAware => x_now != x_prev || known_error,
        SamplingPolicy::ChangeAware => x_now != x_prev,
        SamplingPolicy::Uniform { period } => slot.is_multiple_of(*period),
    }
}
