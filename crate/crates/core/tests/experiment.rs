use std::path::Path;

use coexsim::engine::TimingModel;
use coexsim::experiment::csv::{emit_csv, emit_summary, summary_path, ROW_COLUMNS, SUMMARY_COLUMNS};
use coexsim::experiment::{parse_config, parse_config_str, run_experiment, summarize, Execution, ExperimentSpec};
use coexsim::{Error, Scheme};

const MINI: &str = r#"
# Small grid used for the golden file.
[run]
frames = 400
seed = 42
replications = 2

[sweep]
b2 = [0.2, 0.6]
distance_m = [100.0, 400.0]
"#;

fn mini() -> ExperimentSpec {
    parse_config_str(MINI, Path::new("mini.toml")).unwrap()
}

fn read_records(path: &Path) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().clone();
    let records = r.records().map(|r| r.unwrap()).collect();
    (header, records)
}

#[test]
fn parse_config_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    std::fs::write(&path, MINI).unwrap();
    let spec = parse_config(&path).unwrap();
    assert_eq!(spec, mini());
    assert_eq!(spec.master_seed, 42);

    std::fs::write(&path, "[run]\nseed = 1\n[access]\nscheme = \"NOMA\"\nb2 = 0.3\n").unwrap();
    match parse_config(&path).unwrap_err() {
        Error::Config { line, path: p, .. } => {
            assert_eq!(line, 5);
            assert_eq!(p, path);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn three_rows_make_four_lines() {
    let mut spec = mini();
    spec.sweep.schemes = vec![Scheme::Fdma];
    spec.sweep.models = vec![TimingModel::Idealistic];
    spec.sweep.b2_fractions = vec![0.2, 0.4, 0.6];
    spec.sweep.distances_m = vec![400.0];
    spec.replications = 1;
    let rows = run_experiment(&spec, Execution::Sequential).unwrap();
    assert_eq!(rows.len(), 3);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    emit_csv(&rows, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next().unwrap(), ROW_COLUMNS.join(","));
}

#[test]
fn emitted_values_reparse_at_nine_digits() {
    let rows = run_experiment(&mini(), Execution::Sequential).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    emit_csv(&rows, &path).unwrap();
    let (header, records) = read_records(&path);
    assert_eq!(records.len(), rows.len());
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let close = |text: &str, v: f64| {
        let parsed: f64 = text.parse().unwrap();
        // Nine significant digits: within half a unit in the ninth digit.
        (parsed - v).abs() <= 5e-9 * v.abs() && format!("{parsed:.8e}") == text
    };
    for (rec, row) in records.iter().zip(&rows) {
        assert!(close(&rec[col("tare")], row.intermittent.tare));
        assert!(close(&rec[col("tacae")], row.intermittent.tacae));
        assert!(close(&rec[col("throughput_bps")], row.broadband.throughput_bps));
        match row.intermittent.udc {
            Some(u) => assert!(close(&rec[col("udc")], u)),
            None => assert_eq!(&rec[col("udc")], ""),
        }
        assert_eq!(
            rec[col("deliveries")].parse::<u64>().unwrap(),
            row.intermittent.deliveries
        );
        assert_eq!(rec[col("scheme")], *row.point.scheme.as_str());
        assert_eq!(rec[col("b2_fraction")].is_empty(), row.point.scheme == Scheme::Noma);
    }
}

#[test]
fn golden_mini_sweep() {
    let rows = run_experiment(&mini(), Execution::Parallel { threads: 2 }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mini.csv");
    emit_csv(&rows, &path).unwrap();
    let produced = std::fs::read_to_string(&path).unwrap();
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/mini_sweep.csv");
    if std::env::var_os("COEXSIM_BLESS").is_some() {
        std::fs::write(&golden_path, &produced).unwrap();
    }
    let golden = std::fs::read_to_string(&golden_path).expect("golden file; run with COEXSIM_BLESS=1 to create");
    assert_eq!(produced, golden);
}

#[test]
fn summary_file_has_one_line_per_point() {
    let spec = mini();
    let rows = run_experiment(&spec, Execution::Sequential).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let written = emit_summary(&summarize(&rows), &rows, &path).unwrap();
    assert_eq!(written, summary_path(&path));
    let (header, records) = read_records(&written);
    assert_eq!(header.iter().collect::<Vec<_>>(), SUMMARY_COLUMNS.to_vec());
    // FDMA: 2 models x 2 distances x 2 shares; NOMA: 2 x 2.
    assert_eq!(records.len(), 12);
    assert!(records.iter().all(|r| &r[4] == "2"));
}

#[test]
fn unwritable_path_is_reported() {
    let rows = run_experiment(&mini(), Execution::Sequential).unwrap();
    let err = emit_csv(&rows, Path::new("/nonexistent-dir/out.csv")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(emit_csv(&[], Path::new("/tmp/never.csv")).is_err());
}

#[test]
fn fdma_tare_falls_with_b2_at_long_range() {
    let mut spec = ExperimentSpec::reference();
    spec.base.frame.horizon_frames = 20_000;
    spec.replications = 3;
    spec.sweep.schemes = vec![Scheme::Fdma];
    spec.sweep.models = vec![TimingModel::Idealistic, TimingModel::FrameBased];
    spec.sweep.distances_m = vec![400.0];
    spec.sweep.b2_fractions = vec![0.1, 0.2, 0.4];
    let summary = summarize(&run_experiment(&spec, Execution::Sequential).unwrap());
    for model in [TimingModel::Idealistic, TimingModel::FrameBased] {
        let curve: Vec<f64> = summary
            .iter()
            .filter(|s| s.point.model == model)
            .map(|s| s.tare.mean)
            .collect();
        // At 0.1 B the link is weak enough that the drop is far outside noise.
        assert!(curve[0] > curve[1] && curve[0] > curve[2], "{model}: {curve:?}");
    }
}
