use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use coexsim::experiment::analytic::{analytic_rows, write_analytic};
use coexsim::experiment::csv::{emit_csv, emit_summary, write_rows};
use coexsim::experiment::tables::{all_tables, write_tables_csv, TableSettings};
use coexsim::experiment::{parse_config, run_experiment, summarize, Execution, ExperimentSpec, GridPoint};
use coexsim::phy::{Scheme, User};

/// Remote tracking over a shared uplink: FDMA and NOMA coexistence with a
/// broadband user.
#[derive(Parser)]
#[command(name = "coexsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the base configuration once and print its metrics.
    Simulate(Common),
    /// Run every grid point and replication; write per-run and summary CSV.
    Sweep(Common),
    /// Print closed-form predictions over the FDMA grid (no simulation).
    Analyze(Common),
    /// Reproduce the intermittent-user tables from calibrated sweeps.
    Tables(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment file; omitted keys take the reference values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed, overriding the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; defaults to the file's `output` key, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for independent runs (1 = sequential, 0 = one per core).
    #[arg(long, default_value_t = 0)]
    parallel: usize,
    /// Horizon in frames per run, warm-up included.
    #[arg(long)]
    frames: Option<u64>,
}

impl Common {
    fn spec(&self) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => parse_config(path)?,
            None => ExperimentSpec::reference(),
        };
        if let Some(seed) = self.seed {
            spec.master_seed = seed;
            spec.base.rng_seed = seed;
        }
        if let Some(frames) = self.frames {
            spec.base.frame.horizon_frames = frames;
        }
        if self.out.is_some() {
            spec.output = self.out.clone();
        }
        spec.validate()?;
        Ok(spec)
    }

    fn execution(&self) -> Execution {
        Execution::from_threads(self.parallel)
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(c) => simulate(c),
        Command::Sweep(c) => sweep(c),
        Command::Analyze(c) => analyze(c),
        Command::Tables(c) => tables(c),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn open_out(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// The base configuration as a one-point, one-replication grid.
fn base_point(spec: &ExperimentSpec) -> GridPoint {
    let base = &spec.base;
    GridPoint {
        scheme: base.scheme(),
        model: base.model,
        distance_m: base.intermittent_link.distance_m,
        b2_fraction: (base.scheme() == Scheme::Fdma)
            .then(|| base.band.user_width(User::Intermittent) / base.band.total_hz()),
    }
}

fn simulate(c: &Common) -> Result<()> {
    let mut spec = c.spec()?;
    let point = base_point(&spec);
    spec.sweep.schemes = vec![point.scheme];
    spec.sweep.models = vec![point.model];
    spec.sweep.distances_m = vec![point.distance_m];
    spec.sweep.b2_fractions = vec![point.b2_fraction.unwrap_or(spec.base_b2_fraction)];
    spec.replications = 1;
    let rows = run_experiment(&spec, Execution::Sequential)?;
    let row = &rows[0];

    let im = &row.intermittent;
    let bb = &row.broadband;
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
    let mut report = String::new();
    report += &format!("{}\n", point.describe());
    report += &format!("seed={} stream={}\n", row.seed, row.stream);
    report += &format!("measured_frames={}\n", row.horizon_frames - row.warmup_frames);
    report += &format!("tare={:.6}\ntacae={:.6}\nudc={}\n", im.tare, im.tacae, opt(im.udc));
    report += &format!(
        "attempts={} retransmissions={} deliveries={}\n",
        im.attempts, im.retransmissions, im.deliveries
    );
    report += &format!("bb_rate_bps={}\nbb_power_w={}\n", opt(bb.rate_bps), opt(bb.power_w));
    report += &format!(
        "throughput_bps={:.1}\nenergy_efficiency={}\n",
        bb.throughput_bps,
        opt(bb.energy_efficiency)
    );
    print!("{report}");

    if let Some(path) = &spec.output {
        emit_csv(&rows, path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn sweep(c: &Common) -> Result<()> {
    let spec = c.spec()?;
    let rows = run_experiment(&spec, c.execution())?;
    match &spec.output {
        Some(path) => {
            emit_csv(&rows, path)?;
            let summary = emit_summary(&summarize(&rows), &rows, path)?;
            eprintln!(
                "wrote {} rows to {} and {}",
                rows.len(),
                path.display(),
                summary.display()
            );
        }
        None => write_rows(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn analyze(c: &Common) -> Result<()> {
    if c.frames.is_some() || c.seed.is_some() {
        eprintln!("note: --seed and --frames do not affect closed-form predictions");
    }
    let spec = c.spec()?;
    if !spec.sweep.schemes.contains(&Scheme::Fdma) {
        bail!("closed forms cover FDMA grid points only; the sweep has none");
    }
    let rows = analytic_rows(&spec)?;
    match &spec.output {
        Some(path) => write_analytic(&rows, &spec, open_out(path)?)?,
        None => write_analytic(&rows, &spec, io::stdout().lock())?,
    }
    Ok(())
}

fn tables(c: &Common) -> Result<()> {
    let spec = c.spec()?;
    let settings = TableSettings {
        base: spec.clone(),
        execution: c.execution(),
    };
    let tables = all_tables(&settings)?;
    let mut stdout = io::stdout().lock();
    for t in &tables {
        writeln!(stdout, "{}", t.render())?;
    }
    if let Some(path) = &spec.output {
        write_tables_csv(&tables, open_out(path)?)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
