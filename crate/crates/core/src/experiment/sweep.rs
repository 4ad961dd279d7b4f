//! Grid expansion and execution of an [`ExperimentSpec`].
//!
//! Each (grid point, replication) pair gets its own ChaCha stream derived
//! from the point's coordinates, so a row never depends on where its point
//! sits in the grid or on which worker ran it.

use std::cmp::Ordering;

use crate::engine::{self, BroadbandMetrics, IntermittentMetrics, OverlapTally, SimConfig, TimingModel};
use crate::error::{Error, Result};
use crate::phy::{BandPlan, Scheme};

use super::config::ExperimentSpec;
use super::par::{self, Execution};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub scheme: Scheme,
    pub model: TimingModel,
    /// Intermittent user distance.
    pub distance_m: f64,
    /// Intermittent share of the band; `None` for NOMA.
    pub b2_fraction: Option<f64>,
}

impl GridPoint {
    /// Canonical order: scheme, model, distance, then `b2`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.scheme
            .cmp(&other.scheme)
            .then(self.model.cmp(&other.model))
            .then(self.distance_m.total_cmp(&other.distance_m))
            .then(match (self.b2_fraction, other.b2_fraction) {
                (Some(a), Some(b)) => a.total_cmp(&b),
                (a, b) => a.is_some().cmp(&b.is_some()),
            })
    }

    pub fn describe(&self) -> String {
        let b2 = self.b2_fraction.map_or_else(|| "-".to_string(), |b| b.to_string());
        format!(
            "scheme={} model={} distance_m={} b2={}",
            self.scheme, self.model, self.distance_m, b2
        )
    }

    /// RNG stream of replication `rep` at this point.
    pub fn stream(&self, replication: u32) -> u64 {
        let mut h = Fnv::new();
        h.write(self.scheme.as_str().as_bytes());
        h.write(&[0]);
        h.write(self.model.as_str().as_bytes());
        h.write(&[0]);
        h.write(&self.distance_m.to_bits().to_le_bytes());
        match self.b2_fraction {
            Some(b) => {
                h.write(&[1]);
                h.write(&b.to_bits().to_le_bytes());
            }
            None => h.write(&[0]),
        }
        h.write(&replication.to_le_bytes());
        splitmix64(h.0)
    }

    /// The engine configuration for this point, derived from `base`.
    pub fn configure(&self, base: &SimConfig, seed: u64, replication: u32) -> Result<SimConfig> {
        let mut cfg = base.clone();
        let total = base.band.total_hz();
        cfg.band = match (self.scheme, self.b2_fraction) {
            (Scheme::Noma, _) => BandPlan::noma(total)?,
            (Scheme::Fdma, Some(b2)) => BandPlan::fdma(total, b2 * total)?,
            (Scheme::Fdma, None) => return Err(Error::InvalidConfig("FDMA grid point without b2".into())),
        };
        cfg.model = self.model;
        cfg.intermittent_link.distance_m = self.distance_m;
        cfg.rng_seed = seed;
        cfg.rng_stream = self.stream(replication);
        Ok(cfg)
    }
}

/// FNV-1a, 64 bit.
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= *b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// All grid points in canonical order. NOMA uses the whole band, so it
/// contributes one point per (model, distance) regardless of the `b2` axis.
pub fn expand_grid(spec: &ExperimentSpec) -> Vec<GridPoint> {
    let axes = &spec.sweep;
    let mut points = Vec::new();
    for &scheme in &axes.schemes {
        for &model in &axes.models {
            for &distance_m in &axes.distances_m {
                match scheme {
                    Scheme::Noma => points.push(GridPoint {
                        scheme,
                        model,
                        distance_m,
                        b2_fraction: None,
                    }),
                    Scheme::Fdma => points.extend(axes.b2_fractions.iter().map(|&b| GridPoint {
                        scheme,
                        model,
                        distance_m,
                        b2_fraction: Some(b),
                    })),
                }
            }
        }
    }
    points.sort_by(GridPoint::canonical_cmp);
    points.dedup_by(|a, b| a.canonical_cmp(b) == Ordering::Equal);
    points
}

/// One run at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub point: GridPoint,
    pub replication: u32,
    pub seed: u64,
    pub stream: u64,
    pub horizon_frames: u64,
    pub warmup_frames: u64,
    pub intermittent: IntermittentMetrics,
    pub broadband: BroadbandMetrics,
    pub overlap: OverlapTally,
}

impl ResultRow {
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.point
            .canonical_cmp(&other.point)
            .then(self.replication.cmp(&other.replication))
    }
}

/// Runs every (grid point, replication). Rows come back sorted by grid
/// coordinates and replication; on failure the first error in that order is
/// returned, annotated with its coordinates.
pub fn run_experiment(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let jobs: Vec<(GridPoint, u32)> = expand_grid(spec)
        .into_iter()
        .flat_map(|p| (0..spec.replications).map(move |r| (p, r)))
        .collect();
    let results = par::map(&jobs, exec, |&(point, rep)| run_point(spec, point, rep));
    let mut rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    rows.sort_by(ResultRow::canonical_cmp);
    Ok(rows)
}

fn run_point(spec: &ExperimentSpec, point: GridPoint, replication: u32) -> Result<ResultRow> {
    let annotate = |e: Error| Error::AtGridPoint {
        coordinates: format!("{} replication={replication}", point.describe()),
        source: Box::new(e),
    };
    let cfg = point
        .configure(&spec.base, spec.master_seed, replication)
        .map_err(annotate)?;
    let result = engine::run(&cfg).map_err(annotate)?;
    Ok(ResultRow {
        point,
        replication,
        seed: cfg.rng_seed,
        stream: cfg.rng_stream,
        horizon_frames: cfg.frame.horizon_frames,
        warmup_frames: cfg.frame.warmup_frames(),
        intermittent: result.intermittent,
        broadband: result.broadband,
        overlap: result.overlap,
    })
}

/// Sample mean and standard error of the mean.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Some(Estimate { mean, stderr, count: n })
    }
}

/// Replication statistics at one grid point. Optional metrics average only
/// the replications where they are defined.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub point: GridPoint,
    pub replications: usize,
    pub tare: Estimate,
    pub tacae: Estimate,
    pub udc: Option<Estimate>,
    pub throughput_bps: Estimate,
    pub energy_efficiency: Option<Estimate>,
}

/// Groups rows by grid point; input order is irrelevant.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.canonical_cmp(b));
    sorted
        .chunk_by(|a, b| a.point.canonical_cmp(&b.point) == Ordering::Equal)
        .map(|group| {
            let pick =
                |f: &dyn Fn(&ResultRow) -> Option<f64>| -> Vec<f64> { group.iter().filter_map(|r| f(r)).collect() };
            SummaryRow {
                point: group[0].point,
                replications: group.len(),
                tare: Estimate::of(&pick(&|r| Some(r.intermittent.tare))).unwrap_or_default(),
                tacae: Estimate::of(&pick(&|r| Some(r.intermittent.tacae))).unwrap_or_default(),
                udc: Estimate::of(&pick(&|r| r.intermittent.udc)),
                throughput_bps: Estimate::of(&pick(&|r| Some(r.broadband.throughput_bps))).unwrap_or_default(),
                energy_efficiency: Estimate::of(&pick(&|r| r.broadband.energy_efficiency)),
            }
        })
        .collect()
}
