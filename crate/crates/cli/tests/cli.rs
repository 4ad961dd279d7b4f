use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
[run]
frames = 300
replications = 2

[sweep]
b2 = [0.3, 0.7]
distance_m = [200.0]
"#;

fn coexsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coexsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("exp.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn sweep_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let out = coexsim(&[
        "sweep",
        "--config",
        &cfg,
        "--seed",
        "5",
        "--out",
        a.to_str().unwrap(),
        "--parallel",
        "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = coexsim(&[
        "sweep",
        "--config",
        &cfg,
        "--seed",
        "5",
        "--out",
        b.to_str().unwrap(),
        "--parallel",
        "3",
    ]);
    assert!(out.status.success());
    let (a_bytes, b_bytes) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(a_bytes, b_bytes);
    // FDMA 2 models x 2 shares + NOMA 2 models, 2 replications each, plus header.
    assert_eq!(String::from_utf8(a_bytes).unwrap().lines().count(), 1 + 12);
    assert!(dir.path().join("a.summary.csv").exists());

    let c = dir.path().join("c.csv");
    coexsim(&["sweep", "--config", &cfg, "--seed", "6", "--out", c.to_str().unwrap()]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn sweep_writes_stdout_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = coexsim(&["sweep", "--config", &cfg, "--frames", "250"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("scheme,model,distance_m"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(7) == Some("250")));
}

#[test]
fn simulate_prints_metrics() {
    let out = coexsim(&["simulate", "--frames", "500"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["tare=", "tacae=", "udc=", "throughput_bps=", "energy_efficiency="] {
        assert!(text.contains(key), "missing {key} in {text}");
    }
    assert!(text.contains("measured_frames=400"));
}

#[test]
fn analyze_needs_no_simulation() {
    let out = coexsim(&["analyze"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // 3 distances x 10 shares plus header.
    assert_eq!(text.lines().count(), 31);
    assert!(text.starts_with("distance_m,b2_fraction,intermittent_success"));
}

#[test]
fn tables_render_three_tables() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tables.csv");
    let out = coexsim(&["tables", "--frames", "300", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Idealistic"));
    assert!(text.contains("FDMA vs NOMA"));
    let long = std::fs::read_to_string(&csv).unwrap();
    // 3x2 + 3x4 + 3x4 cells.
    assert_eq!(long.lines().count(), 1 + 6 + 12 + 12);
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[run]\nseed = 2\n\n[access]\nscheme = \"NOMA\"\nb2 = 0.3\n");
    let out = coexsim(&["sweep", "--config", &cfg]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("exp.toml:6"), "{err}");

    let out = coexsim(&["simulate", "--config", "/no/such/file.toml"]);
    assert!(!out.status.success());

    let out = coexsim(&["simulate", "--frames", "50"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("warm-up"));
}
