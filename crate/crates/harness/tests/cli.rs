use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use scramble_harness::aggregate::FIT_SCHEMA_LINE;
use scramble_harness::rows::{read_rows_from_path, COLUMNS};

fn scramble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scramble"))
        .args(args)
        .output()
        .expect("failed to launch scramble")
}

fn bundled(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Every column except the wall time, which legitimately varies.
fn strip_wall_time(text: &str) -> Vec<String> {
    let wall = COLUMNS.iter().position(|c| *c == "wall_time_seconds").unwrap();
    text.lines()
        .map(|line| {
            if line.starts_with('#') {
                return line.to_string();
            }
            line.split(',')
                .enumerate()
                .filter(|(i, _)| *i != wall)
                .map(|(_, f)| f)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

#[test]
fn sweep_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let plots = dir.path().join("plots");
    let o = scramble(&[
        "sweep",
        "--config",
        s(&bundled("configs/demo_2q.json")),
        "--out",
        s(&out),
        "--plot-dir",
        s(&plots),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_rows_from_path(&out).unwrap();
    // 1 epsilon x 4 layer counts x 3 seeds
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.w.is_some() && r.c_rel.is_some()));
    assert!(plots.join("sel_N2_eps1e-4_W.csv").exists());
    assert!(plots.join("sel_N2_eps1e-4_C.csv").exists());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("alpha ="), "{stdout}");
}

#[test]
fn sweep_output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = bundled("configs/demo_2q.json");
    let mut texts = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("rows_{threads}.csv"));
        let o = scramble(&["--threads", threads, "sweep", "--config", s(&config), "--out", s(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        texts.push(strip_wall_time(&std::fs::read_to_string(&out).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn command_line_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.json",
        r#"{"family": "sel", "n_qubits": 2, "layers": [1, 2, 3], "metric": "both"}"#,
    );
    let out = dir.path().join("rows.csv");
    let o = scramble(&[
        "sweep",
        "--config",
        s(&config),
        "--out",
        s(&out),
        "--seeds",
        "2",
        "--epsilon-proxy-w",
        "1e-5",
        "--epsilon-proxy-c",
        "1e-4",
        "--metric",
        "W",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_rows_from_path(&out).unwrap();
    assert_eq!(rows.len(), 3 * 2);
    assert!(rows.iter().all(|r| r.epsilon == 1e-5));
    assert!(rows.iter().all(|r| r.c_rel.is_none() && r.reason == "C-not-requested"));
}

#[test]
fn noiseless_rows_carry_a_reason() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.json",
        r#"{"family": "sel", "n_qubits": 2, "layers": [1], "epsilons": [0.0], "seeds": [0]}"#,
    );
    let out = dir.path().join("rows.csv");
    let o = scramble(&["sweep", "--config", s(&config), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_rows_from_path(&out).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].w, None);
    assert_eq!(rows[0].c_rel, None);
    assert_eq!(rows[0].reason, "noiseless");
}

#[test]
fn metrics_prints_one_point() {
    let o = scramble(&["metrics", "--config", s(&bundled("configs/demo_2q.json")), "--layers", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    for key in ["nu = 16", "F = ", "W = ", "C_rel = ", "lambda1 = ", "lambda1_minus_F = "] {
        assert!(stdout.contains(key), "missing {key:?} in\n{stdout}");
    }
}

#[test]
fn fit_recovers_the_synthetic_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fits.csv");
    let o = scramble(&[
        "fit",
        "--input",
        s(&bundled("fixtures/synthetic_fit.csv")),
        "--out",
        s(&out),
        "--metric",
        "W",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(FIT_SCHEMA_LINE));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let field = |name: &str| -> f64 { row[header.iter().position(|h| *h == name).unwrap()].parse().unwrap() };
    assert!((field("alpha") - 2.0).abs() < 1e-9);
    assert!((field("beta") - 0.5).abs() < 1e-9);
    assert!(lines.next().is_none());
}

#[test]
fn alpha_scan_writes_table_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alpha.csv");
    let o = scramble(&[
        "alpha-scan",
        "--config",
        s(&bundled("configs/demo_2q.json")),
        "--qubits",
        "2,3",
        "--metric",
        "W",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(&out).unwrap();
    assert_eq!(table.lines().count(), 2 + 2);
    let rows = read_rows_from_path(dir.path().join("alpha_rows.csv")).unwrap();
    assert_eq!(rows.len(), 2 * 12);
}

#[test]
fn oversized_register_fails_before_simulating() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "big.json", r#"{"family": "sel", "n_qubits": 13, "layers": [1]}"#);
    let out = dir.path().join("rows.csv");
    let o = scramble(&["sweep", "--config", s(&config), "--out", s(&out)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("insufficient resources"));
    assert!(!out.exists());
}

#[test]
fn malformed_inputs_fail() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "u.json", r#"{"family": "sel", "n_qubits": 2, "layers": [1], "bogus": 1}"#);
    assert!(!scramble(&["sweep", "--config", s(&unknown)]).status.success());
    let sparse = write_config(dir.path(), "s.json", r#"{"family": "hva-sparse", "n_qubits": 2, "layers": [1]}"#);
    assert!(!scramble(&["sweep", "--config", s(&sparse)]).status.success());
    let bad_rows = dir.path().join("bad.csv");
    std::fs::write(&bad_rows, "family,n_qubits\nsel,2\n").unwrap();
    let o = scramble(&["fit", "--input", s(&bad_rows)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema"));
}

#[test]
fn sparse_family_runs_from_bundled_hamiltonian() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let o = scramble(&[
        "sweep",
        "--config",
        s(&bundled("configs/sparse_synthetic.json")),
        "--out",
        s(&out),
        "--seeds",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_rows_from_path(&out).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.family == "hva-sparse" && r.w.is_some()));
}
