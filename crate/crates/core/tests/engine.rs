use approx::assert_relative_eq;
use coexsim::engine::{self, accumulate, compute_udc, ErrorTally, SimConfig, SlotRecord, TimingModel};
use coexsim::experiment::ExperimentSpec;
use coexsim::phy::BandPlan;
use coexsim::source::{CostMatrix, DtmcParams, SamplingPolicy, SourceState};
use coexsim::Error;

fn reference() -> SimConfig {
    ExperimentSpec::reference().base
}

fn calibrated(model: TimingModel, p: f64, frames: u64) -> SimConfig {
    let mut cfg = reference();
    cfg.model = model;
    cfg.success_override = Some(p);
    cfg.frame.horizon_frames = frames;
    cfg
}

#[test]
fn perfect_idealistic_link_never_errs() {
    let r = engine::run(&calibrated(TimingModel::Idealistic, 1.0, 20_000)).unwrap();
    assert_eq!(r.intermittent.tare, 0.0);
    assert_eq!(r.intermittent.tacae, 0.0);
    assert_eq!(r.intermittent.udc, Some(0.0));
    assert_eq!(r.intermittent.retransmissions, 0);
}

#[test]
fn dead_link_delivers_nothing() {
    for model in [TimingModel::Idealistic, TimingModel::FrameBased] {
        let r = engine::run(&calibrated(model, 0.0, 2_000)).unwrap();
        assert!(r.intermittent.attempts > 0);
        assert_eq!(r.intermittent.deliveries, 0);
        assert_eq!(r.intermittent.udc, None);
        // The estimate stays at its initial 0: wrong exactly when X = 1.
        assert!((r.intermittent.tare - 0.4).abs() < 0.05);
    }
}

#[test]
fn identical_configs_are_bit_identical() {
    let cfg = reference();
    let mut short = cfg.clone();
    short.frame.horizon_frames = 5_000;
    let a = engine::run(&short).unwrap();
    let b = engine::run(&short).unwrap();
    assert_eq!(a, b);

    let mut other = short.clone();
    other.rng_stream = 1;
    assert_ne!(engine::run(&other).unwrap().intermittent, a.intermittent);
}

#[test]
fn trace_recount_matches_bit_for_bit() {
    let mut cfg = reference();
    cfg.frame.horizon_frames = 5_000;
    let (result, trace) = engine::run_traced(&cfg).unwrap();
    assert_eq!(trace.len() as u64, result.intermittent.measured_slots);

    // Naive second pass, independent of the tally type.
    let mut wrong = 0u64;
    let mut cost = 0.0;
    let (mut n01, mut n10) = (0u64, 0u64);
    for rec in &trace {
        if rec.x != rec.x_hat {
            wrong += 1;
            match rec.x {
                SourceState::Zero => n01 += 1,
                SourceState::One => n10 += 1,
            }
        }
    }
    cost += n01 as f64 * cfg.costs.c01 + n10 as f64 * cfg.costs.c10;
    let n = trace.len() as f64;
    assert_eq!(result.intermittent.tare, wrong as f64 / n);
    assert_eq!(result.intermittent.tacae, cost / n);
    assert_eq!(
        accumulate(trace.iter().copied(), &cfg.costs),
        (result.intermittent.tare, result.intermittent.tacae)
    );
}

#[test]
fn accumulate_examples() {
    use SourceState::{One, Zero};
    let synced = vec![SlotRecord { x: One, x_hat: One }; 10];
    assert_eq!(accumulate(synced, &CostMatrix::new(5.0, 1.0).unwrap()), (0.0, 0.0));

    let alternating: Vec<_> = (0..10)
        .map(|i| SlotRecord {
            x: One,
            x_hat: if i % 2 == 0 { Zero } else { One },
        })
        .collect();
    assert_eq!(accumulate(alternating, &CostMatrix::UNIT), (0.5, 0.5));

    let mut tally = ErrorTally::default();
    tally.record(SlotRecord { x: Zero, x_hat: One });
    tally.record(SlotRecord { x: One, x_hat: Zero });
    assert_eq!(tally.tacae(&CostMatrix::new(5.0, 1.0).unwrap()), 3.0);
}

#[test]
fn udc_definition() {
    assert_eq!(compute_udc(10, 0), None);
    assert_eq!(compute_udc(10, 10), Some(0.0));
    assert_eq!(compute_udc(16, 10), Some(0.6));
}

#[test]
fn unit_costs_make_tacae_equal_tare() {
    for model in [TimingModel::Idealistic, TimingModel::FrameBased] {
        let mut cfg = calibrated(model, 0.5, 5_000);
        cfg.costs = CostMatrix::UNIT;
        let r = engine::run(&cfg).unwrap();
        assert_eq!(r.intermittent.tacae, r.intermittent.tare);
    }
}

#[test]
fn idealistic_udc_is_geometric() {
    for p in [0.3, 0.62, 0.9] {
        let r = engine::run(&calibrated(TimingModel::Idealistic, p, 100_000)).unwrap();
        let udc = r.intermittent.udc.unwrap();
        assert_relative_eq!(udc, (1.0 - p) / p, max_relative = 0.03);
    }
}

#[test]
fn perfect_link_errors_only_while_waiting_for_uplink() {
    // With every transmission delivered, the estimate is wrong only when a
    // change happens in the feedback slot and waits one slot for the next
    // uplink slot: TARE is about (mean flip rate) / T_F.
    let flip_rate = 2.0 * 0.1 * 0.15 / 0.25;
    let mut tares = Vec::new();
    for (tf, frames) in [(10, 20_000), (100, 2_000)] {
        let mut cfg = calibrated(TimingModel::FrameBased, 1.0, frames);
        cfg.frame.slots_per_frame = tf;
        let tare = engine::run(&cfg).unwrap().intermittent.tare;
        let bound = flip_rate / tf as f64;
        assert!(tare > 0.5 * bound && tare < 1.2 * bound, "T_F={tf}: {tare} vs {bound}");
        tares.push(tare);
    }
    assert!(tares[0] > tares[1]);
}

#[test]
fn perfect_broadband_link_fills_uplink_slots() {
    let mut cfg = reference();
    cfg.broadband.success_override = Some(1.0);
    cfg.frame.horizon_frames = 20_000;
    let r = engine::run(&cfg).unwrap();
    let rate = r.broadband.rate_bps.unwrap();
    // 9 packets per frame: 32 packets take 4 frames.
    assert_eq!(r.broadband.mean_frames_per_block, Some(4.0));
    assert_relative_eq!(r.broadband.throughput_bps, 0.8 * rate, max_relative = 1e-12);
}

#[test]
fn throughput_never_exceeds_uplink_share() {
    for (b2, p) in [(0.1, None), (0.4, None), (0.9, None), (0.4, Some(1.0))] {
        let mut cfg = reference();
        cfg.frame.horizon_frames = 3_000;
        cfg.band = BandPlan::fdma(1e6, b2 * 1e6).unwrap();
        cfg.broadband.success_override = p;
        let r = engine::run(&cfg).unwrap();
        let rate = r.broadband.rate_bps.unwrap();
        assert!(r.broadband.throughput_bps <= rate * 0.9 * (1.0 + 1e-12));
    }
}

#[test]
fn broadband_idle_without_bandwidth() {
    let mut cfg = reference();
    cfg.frame.horizon_frames = 1_000;
    cfg.band = BandPlan::fdma(1e6, 1e6).unwrap();
    let r = engine::run(&cfg).unwrap();
    assert_eq!(r.broadband.rate_bps, None);
    assert_eq!(r.broadband.energy_efficiency, None);
    assert_eq!(r.broadband.throughput_bps, 0.0);
    assert_eq!(r.broadband.slot_attempts, 0);
}

#[test]
fn noma_overlap_tally_recounts_intermittent_success() {
    let mut cfg = reference();
    cfg.frame.horizon_frames = 5_000;
    cfg.band = BandPlan::noma(1e6).unwrap();
    cfg.intermittent_link.distance_m = 100.0;
    let r = engine::run(&cfg).unwrap();
    let (tx, ok) = r.overlap_intermittent;
    assert_eq!(r.overlap.total(), tx);
    assert!(tx > 0);
    assert_eq!(r.overlap.intermittent_success(), Some(ok as f64 / tx as f64));
}

#[test]
fn model_specific_entry_points_check_the_model() {
    let cfg = calibrated(TimingModel::Idealistic, 0.5, 1_000);
    assert!(engine::run_idealistic(&cfg).is_ok());
    assert!(matches!(engine::run_frame_based(&cfg), Err(Error::InvalidConfig(_))));
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = reference();
    cfg.frame.horizon_frames = 100;
    assert!(engine::run(&cfg).is_err());

    let mut cfg = reference();
    cfg.source = DtmcParams { p_s: 0.0, q_s: 0.5 };
    assert!(engine::run(&cfg).is_err());

    let mut cfg = reference();
    cfg.policy = SamplingPolicy::Uniform { period: 0 };
    assert!(engine::run(&cfg).is_err());

    let mut cfg = reference();
    cfg.success_override = Some(1.5);
    assert!(engine::run(&cfg).is_err());
}

#[test]
fn change_aware_ignores_feedback() {
    let mut cfg = calibrated(TimingModel::FrameBased, 0.5, 5_000);
    cfg.policy = SamplingPolicy::ChangeAware;
    let r = engine::run(&cfg).unwrap();
    assert_eq!(r.intermittent.retransmissions, 0);
    assert_eq!(r.intermittent.udc, Some(0.0));
}
