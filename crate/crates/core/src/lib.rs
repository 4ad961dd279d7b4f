//! Simulation of an intermittent remote-tracking user sharing an uplink with
//! a broadband user, under FDMA or power-domain NOMA.
//!
//! The crate is layered bottom-up:
//!
//! - [`phy`]: path loss, noise, Rayleigh fading and per-slot decoding;
//! - [`source`]: the binary Markov source, receiver estimate and sampling;
//! - [`broadband`]: rate/power selection and rateless block delivery;
//! - [`engine`]: the slot loop producing a [`engine::RunResult`];
//! - [`analysis`]: closed forms and Markov-chain oracles (no randomness);
//! - [`experiment`]: configuration files, grid sweeps, CSV and tables.

// Parameter checks are written `!(x > 0.0)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod broadband;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod phy;
pub mod source;

pub use engine::{run, RunResult, SimConfig, TimingModel};
pub use error::{Error, Result};
pub use experiment::{parse_config, run_experiment, Execution, ExperimentSpec, ResultRow};
pub use phy::Scheme;
