//! Physical-layer model: path loss, thermal noise, Rayleigh block fading and
//! per-slot decoding for orthogonal (FDMA) and shared-band (NOMA) access.
//!
//! Powers are linear watts, gains are linear power ratios and bandwidths are
//! in hertz throughout. A decode succeeds when the SINR is *at or above* the
//! rate threshold `2^(r/B) - 1`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 2.998e8;
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Distance and antenna/propagation parameters of one user-to-BS link.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkGeometry {
    pub distance_m: f64,
    pub carrier_hz: f64,
    pub pathloss_exp: f64,
    /// Product of the user and base-station antenna gains (linear).
    pub antenna_gain_product: f64,
}

impl LinkGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.distance_m > 0.0) {
            return Err(Error::invalid("distance_m", "must be positive"));
        }
        if !(self.carrier_hz > 0.0) {
            return Err(Error::invalid("carrier_hz", "must be positive"));
        }
        if !(self.pathloss_exp >= 2.0) {
            return Err(Error::invalid("pathloss_exp", "must be at least 2"));
        }
        if !(self.antenna_gain_product > 0.0) {
            return Err(Error::invalid("antenna_gain_product", "must be positive"));
        }
        Ok(())
    }
}

/// Mean channel power gain `E|h|^2` of a link (free-space constant with a
/// general path-loss exponent).
pub fn large_scale_gain(geom: &LinkGeometry) -> Result<f64> {
    geom.validate()?;
    let wavenumber = 4.0 * std::f64::consts::PI * geom.carrier_hz;
    Ok(geom.antenna_gain_product * SPEED_OF_LIGHT * SPEED_OF_LIGHT
        / (wavenumber * wavenumber * geom.distance_m.powf(geom.pathloss_exp)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub noise_temp_k: f64,
    pub noise_figure_db: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_temp_k > 0.0) {
            return Err(Error::invalid("noise_temp_k", "must be positive"));
        }
        if !self.noise_figure_db.is_finite() {
            return Err(Error::invalid("noise_figure_db", "must be finite"));
        }
        Ok(())
    }
}

/// Thermal noise power over `subband_hz`.
pub fn noise_power(noise: &NoiseModel, subband_hz: f64) -> Result<f64> {
    noise.validate()?;
    if !(subband_hz >= 0.0) {
        return Err(Error::invalid("subband_hz", "must be non-negative"));
    }
    Ok(subband_hz * BOLTZMANN * noise.noise_temp_k * 10f64.powf(noise.noise_figure_db / 10.0))
}

/// Minimum SINR to carry `rate_bps` over `subband_hz`.
pub fn decode_threshold(rate_bps: f64, subband_hz: f64) -> Result<f64> {
    if !(rate_bps >= 0.0) {
        return Err(Error::invalid("rate_bps", "must be non-negative"));
    }
    if rate_bps == 0.0 {
        return Ok(0.0);
    }
    if !(subband_hz > 0.0) {
        return Err(Error::InfeasibleBand { rate_bps });
    }
    Ok((rate_bps / subband_hz).exp2() - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Fdma,
    Noma,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Fdma => "FDMA",
            Scheme::Noma => "NOMA",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum User {
    Broadband,
    Intermittent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubBand {
    /// Reserved for the broadband user.
    Broadband,
    /// Reserved for the intermittent user.
    Intermittent,
    Shared,
}

/// Split of the system bandwidth into the two reserved sub-bands and the
/// shared one. Only the two pure plans (FDMA, NOMA) can be constructed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandPlan {
    total_hz: f64,
    b1_hz: f64,
    b2_hz: f64,
    b3_hz: f64,
}

impl BandPlan {
    /// Orthogonal split: the intermittent user gets `b2_hz`, the broadband
    /// user the remainder.
    pub fn fdma(total_hz: f64, b2_hz: f64) -> Result<Self> {
        if !(total_hz > 0.0) {
            return Err(Error::invalid("total_hz", "must be positive"));
        }
        if !(b2_hz > 0.0 && b2_hz <= total_hz) {
            return Err(Error::invalid("b2_hz", "FDMA needs 0 < b2 <= total bandwidth"));
        }
        Ok(BandPlan {
            total_hz,
            b1_hz: (total_hz - b2_hz).max(0.0),
            b2_hz,
            b3_hz: 0.0,
        })
    }

    pub fn noma(total_hz: f64) -> Result<Self> {
        if !(total_hz > 0.0) {
            return Err(Error::invalid("total_hz", "must be positive"));
        }
        Ok(BandPlan {
            total_hz,
            b1_hz: 0.0,
            b2_hz: 0.0,
            b3_hz: total_hz,
        })
    }

    pub fn scheme(&self) -> Scheme {
        if self.b3_hz > 0.0 {
            Scheme::Noma
        } else {
            Scheme::Fdma
        }
    }

    pub fn total_hz(&self) -> f64 {
        self.total_hz
    }

    pub fn width(&self, band: SubBand) -> f64 {
        match band {
            SubBand::Broadband => self.b1_hz,
            SubBand::Intermittent => self.b2_hz,
            SubBand::Shared => self.b3_hz,
        }
    }

    /// Assignment flag of `user` to `band`.
    pub fn assigned(&self, user: User, band: SubBand) -> bool {
        matches!(
            (self.scheme(), user, band),
            (Scheme::Fdma, User::Broadband, SubBand::Broadband)
                | (Scheme::Fdma, User::Intermittent, SubBand::Intermittent)
                | (Scheme::Noma, _, SubBand::Shared)
        )
    }

    /// The sub-band a user transmits on.
    pub fn band_of(&self, user: User) -> SubBand {
        match (self.scheme(), user) {
            (Scheme::Noma, _) => SubBand::Shared,
            (Scheme::Fdma, User::Broadband) => SubBand::Broadband,
            (Scheme::Fdma, User::Intermittent) => SubBand::Intermittent,
        }
    }

    pub fn user_width(&self, user: User) -> f64 {
        self.width(self.band_of(user))
    }
}

/// Instantaneous channel power gain `|h|^2` of one user in one slot.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct FadingDraw(f64);

impl FadingDraw {
    pub fn new(power_gain: f64) -> Self {
        debug_assert!(power_gain >= 0.0);
        FadingDraw(power_gain)
    }

    pub fn power_gain(self) -> f64 {
        self.0
    }
}

/// Rayleigh block fading: `|h|^2` is exponential with mean `beta`.
pub fn draw_fading_power<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> FadingDraw {
    let unit: f64 = Exp1.sample(rng);
    FadingDraw(beta * unit)
}

/// Received SINR. `interferer` is the other user's `(gain, power)` when it
/// overlaps on the same sub-band; pass `None` otherwise.
pub fn sinr(own_gain: FadingDraw, own_power_w: f64, interferer: Option<(FadingDraw, f64)>, sigma2_w: f64) -> f64 {
    let interference = interferer.map_or(0.0, |(g, p)| g.0 * p);
    own_gain.0 * own_power_w / (interference + sigma2_w)
}

/// Interference-free success probability under Rayleigh fading.
pub fn closed_form_success_prob(beta: f64, power_w: f64, sigma2_w: f64, gamma_min: f64) -> f64 {
    if gamma_min <= 0.0 {
        return 1.0;
    }
    if power_w <= 0.0 || beta <= 0.0 {
        return 0.0;
    }
    (-gamma_min * sigma2_w / (beta * power_w)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decode {
    DecodedDirect,
    DecodedAfterSic,
    Failed,
}

impl Decode {
    pub fn is_decoded(self) -> bool {
        !matches!(self, Decode::Failed)
    }

    pub fn class(self) -> OutcomeClass {
        if self.is_decoded() {
            OutcomeClass::I
        } else {
            OutcomeClass::E
        }
    }
}

/// `I`: the signal was recovered (directly or after SIC). `E`: it was not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutcomeClass {
    I,
    E,
}

/// Decode result of one slot; `None` for a user that did not transmit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub broadband: Option<Decode>,
    pub intermittent: Option<Decode>,
}

impl DecodeOutcome {
    pub fn of(&self, user: User) -> Option<Decode> {
        match user {
            User::Broadband => self.broadband,
            User::Intermittent => self.intermittent,
        }
    }

    /// Ordered `(broadband, intermittent)` class pair, present when both
    /// users transmitted.
    pub fn class_pair(&self) -> Option<(OutcomeClass, OutcomeClass)> {
        Some((self.broadband?.class(), self.intermittent?.class()))
    }
}

/// One user's transmission in a slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transmission {
    pub gain: FadingDraw,
    pub power_w: f64,
    pub threshold: f64,
}

impl Transmission {
    fn received_power(&self) -> f64 {
        self.gain.0 * self.power_w
    }

    fn clears(&self, interference_w: f64, sigma2_w: f64) -> bool {
        sinr(self.gain, self.power_w, None, interference_w + sigma2_w) >= self.threshold
    }
}

fn decode_alone(tx: &Transmission, sigma2_w: f64) -> Decode {
    if tx.clears(0.0, sigma2_w) {
        Decode::DecodedDirect
    } else {
        Decode::Failed
    }
}

/// Orthogonal access: each transmitting user is decoded on its own sub-band
/// against noise only.
pub fn decode_fdma_slot(
    broadband: Option<(&Transmission, f64)>,
    intermittent: Option<(&Transmission, f64)>,
) -> DecodeOutcome {
    DecodeOutcome {
        broadband: broadband.map(|(tx, s2)| decode_alone(tx, s2)),
        intermittent: intermittent.map(|(tx, s2)| decode_alone(tx, s2)),
    }
}

/// Shared band with capture and one round of successive interference
/// cancellation.
///
/// Every user whose SINR (other user as noise) clears its threshold is
/// decoded directly. If exactly one was, its signal is subtracted and the
/// other is retried against noise only. Both evaluations use the same
/// fading realisation.
pub fn decode_noma_slot(
    broadband: Option<&Transmission>,
    intermittent: Option<&Transmission>,
    sigma2_w: f64,
) -> DecodeOutcome {
    match (broadband, intermittent) {
        (None, None) => DecodeOutcome::default(),
        (Some(b), None) => DecodeOutcome {
            broadband: Some(decode_alone(b, sigma2_w)),
            intermittent: None,
        },
        (None, Some(i)) => DecodeOutcome {
            broadband: None,
            intermittent: Some(decode_alone(i, sigma2_w)),
        },
        (Some(b), Some(i)) => {
            let b_direct = b.clears(i.received_power(), sigma2_w);
            let i_direct = i.clears(b.received_power(), sigma2_w);
            let after_sic = |tx: &Transmission| {
                if tx.clears(0.0, sigma2_w) {
                    Decode::DecodedAfterSic
                } else {
                    Decode::Failed
                }
            };
            let (bb, im) = match (b_direct, i_direct) {
                (true, true) => (Decode::DecodedDirect, Decode::DecodedDirect),
                (true, false) => (Decode::DecodedDirect, after_sic(i)),
                (false, true) => (after_sic(b), Decode::DecodedDirect),
                (false, false) => (Decode::Failed, Decode::Failed),
            };
            DecodeOutcome {
                broadband: Some(bb),
                intermittent: Some(im),
            }
        }
    }
}
