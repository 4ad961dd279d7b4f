//! Analytical oracles for the simulator.
//!
//! The joint chain tracks `(X, E)`, the source state and whether the receiver
//! estimate is wrong, and is exact for any policy whose sampling and
//! transmission events depend only on "the source just changed" versus
//! "the receiver is known to be wrong". The mean-field error chain instead
//! averages the `E` transitions over the stationary source law; its
//! stationary error rate is the familiar closed form
//! `2 p q (1-p2) / (p2 (p+q) + 4 p q (1-p2))`, which coincides with the
//! joint chain only for symmetric sources.

use crate::error::{Error, Result};
use crate::phy::{self, LinkGeometry, NoiseModel};
use crate::source::{dtmc_stationary, CostMatrix, DtmcParams, SourceState};

/// Closed-form TARE of semantics-aware sampling with instantaneous
/// transmission and feedback, at per-attempt success probability `p`.
pub fn tare_idealistic_closed_form(p_s: f64, q_s: f64, p: f64) -> Result<f64> {
    DtmcParams::new(p_s, q_s)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", "must be a probability"));
    }
    let fail = 1.0 - p;
    Ok(2.0 * p_s * q_s * fail / (p * (p_s + q_s) + 4.0 * p_s * q_s * fail))
}

/// Probabilities of the joint sampling/transmission/decoding events in a slot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventProbs {
    /// Sample generated, not transmitted.
    pub sample_no_tx: f64,
    /// Sample generated and transmitted.
    pub sample_tx: f64,
    /// ... and the transmission failed.
    pub tx_fail: f64,
    /// ... and the transmission was decoded.
    pub tx_success: f64,
}

impl EventProbs {
    /// Sample always taken and sent; decoded with probability `p`.
    pub fn always_send(p: f64) -> Self {
        EventProbs {
            sample_no_tx: 0.0,
            sample_tx: 1.0,
            tx_fail: 1.0 - p,
            tx_success: p,
        }
    }

    pub const NEVER: EventProbs = EventProbs {
        sample_no_tx: 0.0,
        sample_tx: 0.0,
        tx_fail: 0.0,
        tx_success: 0.0,
    };

    pub fn validate(&self) -> Result<()> {
        let all = [self.sample_no_tx, self.sample_tx, self.tx_fail, self.tx_success];
        if all.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("event_probs", "entries must be probabilities"));
        }
        if (self.tx_fail + self.tx_success - self.sample_tx).abs() > 1e-12 {
            return Err(Error::invalid(
                "event_probs",
                "decode outcomes must split the transmit event",
            ));
        }
        if self.sample_no_tx + self.sample_tx > 1.0 + 1e-12 {
            return Err(Error::invalid("event_probs", "sampling events exceed probability one"));
        }
        Ok(())
    }
}

/// Event probabilities for the two situations that can trigger an update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyEvents {
    /// The source has just changed state.
    pub on_change: EventProbs,
    /// The source did not change and the receiver holds the wrong state.
    pub in_error: EventProbs,
}

impl PolicyEvents {
    /// Semantics-aware sampling with instantaneous feedback.
    pub fn idealistic_semantics_aware(p: f64) -> Self {
        PolicyEvents {
            on_change: EventProbs::always_send(p),
            in_error: EventProbs::always_send(p),
        }
    }

    /// Change-aware sampling, no feedback-driven retries.
    pub fn idealistic_change_aware(p: f64) -> Self {
        PolicyEvents {
            on_change: EventProbs::always_send(p),
            in_error: EventProbs::NEVER,
        }
    }
}

/// Joint `(X, E)` Markov chain. State index is `x + 2 e`, i.e. the order
/// `(0,0), (1,0), (0,1), (1,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointChain {
    pub matrix: [[f64; 4]; 4],
    pub events: PolicyEvents,
}

pub fn state_index(x: SourceState, error: bool) -> usize {
    x.index() + 2 * error as usize
}

pub fn build_joint_chain(params: &DtmcParams, events: &PolicyEvents) -> Result<JointChain> {
    params.validate()?;
    events.on_change.validate()?;
    events.in_error.validate()?;

    let mut m = [[0.0; 4]; 4];
    for x in [SourceState::Zero, SourceState::One] {
        let flip = params.flip_prob(x);
        let y = x.flipped();

        // Synced: holding keeps sync; a flip is repaired only by a delivery.
        let from = state_index(x, false);
        m[from][state_index(x, false)] += 1.0 - flip;
        m[from][state_index(y, false)] += flip * events.on_change.tx_success;
        m[from][state_index(y, true)] += flip * (1.0 - events.on_change.tx_success);

        // Wrong: a flip lands on the held estimate; otherwise a delivery is needed.
        let from = state_index(x, true);
        m[from][state_index(y, false)] += flip;
        m[from][state_index(x, false)] += (1.0 - flip) * events.in_error.tx_success;
        m[from][state_index(x, true)] += (1.0 - flip) * (1.0 - events.in_error.tx_success);
    }
    Ok(JointChain {
        matrix: m,
        events: *events,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainMetrics {
    pub tare: f64,
    pub tacae: f64,
    /// Stationary law over `(X, E)` in [`state_index`] order.
    pub stationary: [f64; 4],
}

impl ChainMetrics {
    /// Stationary probability of source `x` with estimate `x_hat`.
    pub fn joint(&self, x: SourceState, x_hat: SourceState) -> f64 {
        self.stationary[state_index(x, x != x_hat)]
    }
}

/// Stationary law of a finite chain by a direct solve of the balance
/// equations with one row replaced by the normalisation.
pub fn stationary<const N: usize>(p: &[[f64; N]; N]) -> Result<[f64; N]> {
    // Rows: (P^T - I) pi = 0, last row replaced by sum(pi) = 1.
    let mut a = [[0.0; N]; N];
    let mut b = [0.0; N];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = p[j][i] - if i == j { 1.0 } else { 0.0 };
        }
    }
    a[N - 1] = [1.0; N];
    b[N - 1] = 1.0;

    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-13 {
            return Err(Error::NoUniqueStationary);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..N {
            if r != col {
                let factor = a[r][col] / a[col][col];
                if factor != 0.0 {
                    let pivot_row = a[col];
                    for (v, pv) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                        *v -= factor * pv;
                    }
                    b[r] -= factor * b[col];
                }
            }
        }
    }
    let mut pi = [0.0; N];
    for i in 0..N {
        pi[i] = b[i] / a[i][i];
    }
    Ok(pi)
}

pub fn chain_metrics(chain: &JointChain, costs: &CostMatrix) -> Result<ChainMetrics> {
    let pi = stationary(&chain.matrix)?;
    let zero_as_one = pi[state_index(SourceState::Zero, true)];
    let one_as_zero = pi[state_index(SourceState::One, true)];
    Ok(ChainMetrics {
        tare: zero_as_one + one_as_zero,
        tacae: zero_as_one * costs.c01 + one_as_zero * costs.c10,
        stationary: pi,
    })
}

/// Two-state chain on `E` alone, each transition averaged over the
/// stationary source law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorChain {
    pub to_error: f64,
    pub to_sync: f64,
}

impl ErrorChain {
    pub fn tare(&self) -> f64 {
        self.to_error / (self.to_error + self.to_sync)
    }
}

pub fn mean_field_error_chain(params: &DtmcParams, events: &PolicyEvents) -> Result<ErrorChain> {
    let (pi0, pi1) = dtmc_stationary(params)?;
    events.on_change.validate()?;
    events.in_error.validate()?;
    let mut to_error = 0.0;
    let mut to_sync = 0.0;
    for (x, weight) in [(SourceState::Zero, pi0), (SourceState::One, pi1)] {
        let flip = params.flip_prob(x);
        to_error += weight * flip * (1.0 - events.on_change.tx_success);
        to_sync += weight * (flip + (1.0 - flip) * events.in_error.tx_success);
    }
    Ok(ErrorChain { to_error, to_sync })
}

/// Exact `E[F(K)]`: frames to collect `block_size` packets when each of the
/// `slots_per_frame - 1` uplink slots succeeds independently with `p`.
pub fn expected_frames(block_size: u32, p: f64, slots_per_frame: u32) -> Result<f64> {
    if block_size < 1 {
        return Err(Error::invalid("block_size", "must be at least 1"));
    }
    if slots_per_frame < 2 {
        return Err(Error::invalid("slots_per_frame", "must be at least 2"));
    }
    if !(p <= 1.0) || p < 0.0 {
        return Err(Error::invalid("p", "must be a probability"));
    }
    if p == 0.0 {
        return Err(Error::Divergence);
    }
    let n = (slots_per_frame - 1) as usize;
    let pmf = binomial_pmf(n, p);
    let k = block_size as usize;
    // e[r]: expected frames with r packets still missing.
    let mut e = vec![0.0; k + 1];
    for r in 1..=k {
        let mut acc = 1.0;
        for (s, &ps) in pmf.iter().enumerate().skip(1) {
            acc += ps * e[r.saturating_sub(s)];
        }
        e[r] = acc / (1.0 - pmf[0]);
    }
    Ok(e[k])
}

fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; n + 1];
    let mut coeff = 1.0;
    for (k, slot) in pmf.iter_mut().enumerate() {
        if k > 0 {
            coeff *= (n - k + 1) as f64 / k as f64;
        }
        *slot = coeff * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
    }
    pmf
}

/// Long-run throughput `r K / (E[F(K)] T_F)`.
pub fn predicted_throughput(rate_bps: f64, block_size: u32, p: f64, slots_per_frame: u32) -> Result<f64> {
    let frames = expected_frames(block_size, p, slots_per_frame)?;
    Ok(rate_bps * block_size as f64 / (frames * slots_per_frame as f64))
}

/// Per-attempt success probability of the intermittent user on its own
/// FDMA sub-band.
pub fn fdma_intermittent_success(
    geometry: &LinkGeometry,
    noise: &NoiseModel,
    b2_hz: f64,
    rate_bps: f64,
    power_w: f64,
) -> Result<f64> {
    let beta = phy::large_scale_gain(geometry)?;
    let gamma_min = phy::decode_threshold(rate_bps, b2_hz)?;
    let sigma2 = phy::noise_power(noise, b2_hz)?;
    Ok(phy::closed_form_success_prob(beta, power_w, sigma2, gamma_min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sa(p_s: f64, q_s: f64, p: f64) -> JointChain {
        build_joint_chain(
            &DtmcParams::new(p_s, q_s).unwrap(),
            &PolicyEvents::idealistic_semantics_aware(p),
        )
        .unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(tare_idealistic_closed_form(0.1, 0.15, 1.0).unwrap(), 0.0);
        assert_relative_eq!(
            tare_idealistic_closed_form(0.3, 0.3, 0.0).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        let v = tare_idealistic_closed_form(0.1, 0.15, 0.6).unwrap();
        assert!((v - 0.06897).abs() < 1e-5, "{v}");
        assert!(tare_idealistic_closed_form(0.1, 0.15, 1.5).is_err());
    }

    #[test]
    fn chain_rows_are_stochastic() {
        for p in [0.0, 0.3, 1.0] {
            let c = sa(0.2, 0.7, p);
            for row in c.matrix {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
                assert!(row.iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }
        let ca = build_joint_chain(
            &DtmcParams::new(0.1, 0.15).unwrap(),
            &PolicyEvents {
                on_change: EventProbs::NEVER,
                in_error: EventProbs::NEVER,
            },
        )
        .unwrap();
        for row in ca.matrix {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn transition_blocks_match_conditional_forms() {
        let (p_s, q_s, p) = (0.1, 0.15, 0.6);
        let c = sa(p_s, q_s, p);
        let z = SourceState::Zero;
        let o = SourceState::One;
        // Sync at X=0 stays sync: (1 - p_s) + p_s * p.
        let stay_sync = c.matrix[state_index(z, false)][state_index(z, false)]
            + c.matrix[state_index(z, false)][state_index(o, false)];
        assert_relative_eq!(stay_sync, (1.0 - p_s) + p_s * p, epsilon = 1e-15);
        // Error at X=0 stays wrong: (1 - p_s)(0 + (1 - p)); the q_s counterpart at X=1.
        let stay_err =
            c.matrix[state_index(z, true)][state_index(z, true)] + c.matrix[state_index(z, true)][state_index(o, true)];
        assert_relative_eq!(stay_err, (1.0 - p_s) * (1.0 - p), epsilon = 1e-15);
        let stay_err1 =
            c.matrix[state_index(o, true)][state_index(o, true)] + c.matrix[state_index(o, true)][state_index(z, true)];
        assert_relative_eq!(stay_err1, (1.0 - q_s) * (1.0 - p), epsilon = 1e-15);
    }

    #[test]
    fn inconsistent_events_rejected() {
        let bad = PolicyEvents {
            on_change: EventProbs {
                sample_no_tx: 0.0,
                sample_tx: 1.0,
                tx_fail: 0.5,
                tx_success: 0.6,
            },
            in_error: EventProbs::NEVER,
        };
        assert!(build_joint_chain(&DtmcParams::new(0.1, 0.2).unwrap(), &bad).is_err());
    }

    #[test]
    fn perfect_link_has_no_error_mass() {
        let m = chain_metrics(&sa(0.1, 0.15, 1.0), &CostMatrix::new(5.0, 1.0).unwrap()).unwrap();
        assert!(m.tare.abs() < 1e-15);
        assert!(m.tacae.abs() < 1e-14);
        assert_relative_eq!(m.stationary[0], 0.6, epsilon = 1e-12);
    }

    #[test]
    fn unit_costs_give_tare() {
        let m = chain_metrics(&sa(0.2, 0.7, 0.4), &CostMatrix::UNIT).unwrap();
        assert_relative_eq!(m.tacae, m.tare, epsilon = 1e-15);
        assert_relative_eq!(
            m.tare,
            m.joint(SourceState::Zero, SourceState::One) + m.joint(SourceState::One, SourceState::Zero),
            epsilon = 1e-15
        );
    }

    #[test]
    fn no_deliveries_splits_the_chain() {
        let ev = PolicyEvents {
            on_change: EventProbs::always_send(0.0),
            in_error: EventProbs::always_send(0.0),
        };
        let c = build_joint_chain(&DtmcParams::new(0.1, 0.15).unwrap(), &ev).unwrap();
        // The estimate never moves, so each initial estimate is its own
        // closed class and the long-run error depends on where it started.
        assert!(matches!(
            chain_metrics(&c, &CostMatrix::UNIT),
            Err(Error::NoUniqueStationary)
        ));
    }

    #[test]
    fn reducible_chain_is_rejected() {
        let p = [[1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(stationary(&p), Err(Error::NoUniqueStationary)));
    }

    #[test]
    fn stationary_residual() {
        let c = sa(0.2, 0.7, 0.37);
        let pi = stationary(&c.matrix).unwrap();
        assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for j in 0..4 {
            let lhs: f64 = (0..4).map(|i| pi[i] * c.matrix[i][j]).sum();
            assert!((lhs - pi[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_field_chain_is_the_closed_form() {
        let v = mean_field_error_chain(
            &DtmcParams::new(0.1, 0.15).unwrap(),
            &PolicyEvents::idealistic_semantics_aware(0.6),
        )
        .unwrap()
        .tare();
        assert_relative_eq!(v, tare_idealistic_closed_form(0.1, 0.15, 0.6).unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn joint_chain_equals_closed_form_for_symmetric_sources() {
        for s in [0.05, 0.2, 0.45] {
            for p in [0.2, 0.6, 0.95] {
                let m = chain_metrics(&sa(s, s, p), &CostMatrix::UNIT).unwrap();
                assert_relative_eq!(m.tare, tare_idealistic_closed_form(s, s, p).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn expected_frames_exact_cases() {
        assert_relative_eq!(expected_frames(32, 1.0, 10).unwrap(), 4.0, epsilon = 1e-12);
        assert_relative_eq!(expected_frames(9, 1.0, 10).unwrap(), 1.0, epsilon = 1e-12);
        // One uplink slot per frame: geometric waiting, K / p.
        assert_relative_eq!(expected_frames(3, 0.25, 2).unwrap(), 12.0, epsilon = 1e-9);
        assert!(matches!(expected_frames(32, 0.0, 10), Err(Error::Divergence)));
    }

    #[test]
    fn expected_frames_monotone() {
        let mut prev = f64::INFINITY;
        for p in [0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            let f = expected_frames(32, p, 10).unwrap();
            assert!(f <= prev + 1e-12);
            prev = f;
        }
        let mut prev = 0.0;
        for k in 1..40 {
            let f = expected_frames(k, 0.8, 10).unwrap();
            assert!(f >= prev - 1e-12);
            prev = f;
        }
    }

    #[test]
    fn fdma_success_examples() {
        let geom = LinkGeometry {
            distance_m: 400.0,
            carrier_hz: 2e9,
            pathloss_exp: 2.6,
            antenna_gain_product: 10.0,
        };
        let noise = NoiseModel {
            noise_temp_k: 190.0,
            noise_figure_db: 5.0,
        };
        let p = fdma_intermittent_success(&geom, &noise, 0.4e6, 1.024e6, 0.2).unwrap();
        assert!((p - 0.99967).abs() < 1e-4, "{p}");
        // Threshold -> 0 as the band grows, but noise grows with it: the
        // product tends to r ln2 kT F, so p2 saturates just below one.
        assert!(phy::decode_threshold(1.024e6, 1e12).unwrap() < 1e-5);
        let huge = fdma_intermittent_success(&geom, &noise, 1e12, 1.024e6, 0.2).unwrap();
        let sigma_per_hz = phy::noise_power(&noise, 1.0).unwrap();
        let beta = phy::large_scale_gain(&geom).unwrap();
        let limit = (-1.024e6 * std::f64::consts::LN_2 * sigma_per_hz / (beta * 0.2)).exp();
        assert_relative_eq!(huge, limit, max_relative = 1e-6);
        assert!(huge > fdma_intermittent_success(&geom, &noise, 1e6, 1.024e6, 0.2).unwrap());
        let mut prev = 0.0;
        for i in 1..=10 {
            let p = fdma_intermittent_success(&geom, &noise, i as f64 * 0.1e6, 1.024e6, 0.2).unwrap();
            assert!(p >= prev);
            prev = p;
        }
    }
}
