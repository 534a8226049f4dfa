use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use detect_vqe::io::{read_curve, read_noise_scan, read_rows, read_sweep, DemoRow, ExactRow, ScoreRow};
use detect_vqe::vqe::{CoefficientTable, Family};

const BIN: &str = env!("CARGO_BIN_EXE_detect-vqe");

fn table_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/h2_sto3g.csv")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

fn eig_oracle(g: [f64; 5]) -> f64 {
    let z = |b: usize| if b == 0 { 1.0 } else { -1.0 };
    nalgebra::Matrix4::from_fn(|i, j| {
        let (i1, i2, j1, j2) = (i & 1, i >> 1, j & 1, j >> 1);
        let diag = if i == j { g[0] + g[1] * z(i1) + g[2] * z(i2) + g[3] * z(i1) * z(i2) } else { 0.0 };
        diag + if i1 != j1 && i2 != j2 { g[4] } else { 0.0 }
    })
    .symmetric_eigenvalues()
    .min()
}

#[test]
fn exact_on_synthetic_and_full_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("one.csv"), "R,g1,g2,g3,g4,g5\n0.7,1,0,0,0,0\n1.0,0.1,0.2,-0.3,0.05,0\n").unwrap();
    ok(d, &["exact", "--coeffs", "one.csv", "--out", "e.csv"]);
    let rows: Vec<ExactRow> = read_rows(fs::File::open(d.join("e.csv")).unwrap()).unwrap();
    assert_eq!(rows[0].e_exact, 1.0);
    // g5 = 0 leaves the Hamiltonian diagonal.
    let diag_min = [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)]
        .iter()
        .map(|(z1, z2)| 0.1 + 0.2 * z1 - 0.3 * z2 + 0.05 * z1 * z2)
        .fold(f64::INFINITY, f64::min);
    assert!((rows[1].e_exact - diag_min).abs() < 1e-12);

    let full = table_path();
    ok(d, &["exact", "--coeffs", full.to_str().unwrap(), "--out", "full.csv"]);
    let rows: Vec<ExactRow> = read_rows(fs::File::open(d.join("full.csv")).unwrap()).unwrap();
    let table = CoefficientTable::<f64>::from_path(&full).unwrap();
    assert_eq!(rows.len(), table.len());
    for (row, t) in rows.iter().zip(table.rows()) {
        assert!((row.e_exact - eig_oracle(t.g.g)).abs() < 1e-12);
    }
}

#[test]
fn malformed_table_is_an_ingestion_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.csv"), "R,g1,g2,g3,g4,g5\n0.7,1,0,0,0,0\n0.8,1,zero,0,0,0\n").unwrap();
    let out = run(dir.path(), &["exact", "--coeffs", "bad.csv", "--out", "e.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = run(dir.path(), &["exact", "--coeffs", "missing.csv", "--out", "e.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(listing(dir.path()), vec!["bad.csv"]);
}

#[test]
fn physical_exact_sweep_gives_trig_columns() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["sweep", "--family", "physical", "--exact", "--noise-p", "0", "--out", "t.csv"]);
    let est = read_sweep::<f64>(fs::File::open(dir.path().join("t.csv")).unwrap(), Family::Physical).unwrap();
    assert_eq!(est.points.len(), 257);
    for p in &est.points {
        let t = p.terms.unwrap();
        assert!((t.z1 - p.theta.cos()).abs() < 1e-12);
        assert!((t.x1x2 - p.theta.sin()).abs() < 1e-12);
    }
}

#[test]
fn seeded_encoded_sweeps_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = |out: &'static str| ["sweep", "--family", "encoded", "--shots", "8192", "--seed", "7", "--grid", "65", "--noise-p", "0.02", "--out", out];
    ok(d, &args("a.csv"));
    ok(d, &args("b.csv"));
    assert_eq!(fs::read(d.join("a.csv")).unwrap(), fs::read(d.join("b.csv")).unwrap());
    assert_eq!(fs::read(d.join("a.discards.json")).unwrap(), fs::read(d.join("b.discards.json")).unwrap());
    let stats: serde_json::Value = serde_json::from_slice(&fs::read(d.join("a.discards.json")).unwrap()).unwrap();
    assert!(stats["totals"]["discarded_parity"].as_f64().unwrap() > 0.0);
    assert_eq!(stats["points"].as_array().unwrap().len(), 65);
}

#[test]
fn usage_errors_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: [&[&str]; 6] = [
        &["sweep", "--family", "encoded", "--unfold", "on", "--out", "x.csv"],
        &["sweep", "--out", "x.csv"],
        &["sweep", "--family", "physical", "--grid", "256", "--out", "x.csv"],
        &["sweep", "--family", "physical", "--shots", "10", "--exact", "--out", "x.csv"],
        &["sweep", "--family", "physical", "--readout-model", "0.1", "--out", "x.csv"],
        &["unfold-demo", "--n", "3", "--out", "x.csv"],
    ];
    for args in cases {
        let out = run(d, args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    assert!(listing(d).is_empty());
}

#[test]
fn config_file_is_merged_and_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("run.toml"), "[noise]\np = 0.05\n[sweep]\nfamily = \"physical\"\ngrid = 9\n").unwrap();
    ok(d, &["sweep", "--config", "run.toml", "--out", "a.csv"]);
    ok(d, &["sweep", "--config", "run.toml", "--noise-p", "0", "--out", "b.csv"]);
    let a = read_sweep::<f64>(fs::File::open(d.join("a.csv")).unwrap(), Family::Physical).unwrap();
    let b = read_sweep::<f64>(fs::File::open(d.join("b.csv")).unwrap(), Family::Physical).unwrap();
    assert_eq!(a.points.len(), 9);
    assert!((b.points[4].terms.unwrap().z1 - 1.0).abs() < 1e-12);
    assert!(a.points[4].terms.unwrap().z1 < 0.99);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(d.join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["job"]["noise"]["p2"].as_f64(), Some(0.05));
    fs::write(d.join("typo.toml"), "[noise]\nrate = 0.05\n").unwrap();
    assert_eq!(run(d, &["sweep", "--config", "typo.toml", "--family", "physical", "--out", "c.csv"]).status.code(), Some(2));
}

#[test]
fn curve_round_trip_and_grid_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let table = table_path();
    let t = table.to_str().unwrap();
    ok(d, &["sweep", "--family", "physical", "--exact", "--grid", "33", "--out", "p.csv"]);
    ok(d, &["sweep", "--family", "encoded", "--exact", "--grid", "33", "--out", "e.csv"]);
    ok(d, &["curve", "--coeffs", t, "--terms", "p.csv", "--terms", "e.csv"]);
    let curve = read_curve(fs::File::open(d.join("p.curve.csv")).unwrap()).unwrap();
    assert_eq!(curve.len(), CoefficientTable::<f64>::from_path(&table).unwrap().len());
    assert!(curve.iter().all(|r| r.de.abs() < 1e-9 && r.chem_acc));
    assert!(d.join("e.curve.csv").exists());

    ok(d, &["sweep", "--family", "physical", "--exact", "--grid", "17", "--out", "q.csv"]);
    let out = run(d, &["curve", "--coeffs", t, "--terms", "p.csv", "--terms", "q.csv", "--out", "1.csv", "--out", "2.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!d.join("1.csv").exists());
}

#[test]
fn noise_scan_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let t = table_path();
    let out = ok(d, &["noise-scan", "--coeffs", t.to_str().unwrap(), "--r", "0.75", "--p", "0,0.05", "--grid", "65", "--out", "s.csv"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("crossover"));
    let rows = read_noise_scan(fs::File::open(d.join("s.csv")).unwrap()).unwrap();
    assert!(rows[0].error_physical < 1e-9 && rows[0].error_encoded < 1e-9);
    assert!(rows[1].error_encoded < rows[1].error_physical);
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(d.join("s.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["r_used"].as_f64(), Some(0.75));
    assert!(summary["crossover"].is_null());

    let out = ok(d, &["noise-scan", "--coeffs", t.to_str().unwrap(), "--r", "0.77", "--p", "0.05", "--grid", "9", "--out", "n.csv"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("nearest row"));
}

#[test]
fn unfold_demo_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["unfold-demo", "--n", "2", "--readout-model", "ideal", "--shots", "1000", "--out", "z.csv"]);
    let s: serde_json::Value = serde_json::from_slice(&fs::read(d.join("z.summary.json")).unwrap()).unwrap();
    assert_eq!(s["l1_raw"], s["l1_corrected"]);

    ok(d, &["unfold-demo", "--n", "6", "--shots", "1000000", "--seed", "4", "--out", "a.csv"]);
    ok(d, &["unfold-demo", "--n", "6", "--shots", "1000000", "--seed", "4", "--out", "b.csv"]);
    assert_eq!(fs::read(d.join("a.csv")).unwrap(), fs::read(d.join("b.csv")).unwrap());
    let s: serde_json::Value = serde_json::from_slice(&fs::read(d.join("a.summary.json")).unwrap()).unwrap();
    assert!(s["l1_corrected"].as_f64().unwrap() < s["l1_raw"].as_f64().unwrap());
    let rows: Vec<DemoRow> = read_rows(fs::File::open(d.join("a.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 64);
    assert_eq!(rows[5].bits, "000101");
}

#[test]
fn score_mappings_ranks_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = r#"
        [[profile]]
        name = "noisy"
        p = 0.02
        readout = "0.05,0.1"
        [[profile]]
        name = "clean-a"
        [[profile]]
        name = "clean-b"
        [[profile]]
        name = "quiet"
        p = 0.02
        readout = "0.01,0.02"
    "#;
    fs::write(d.join("m.toml"), cfg).unwrap();
    ok(d, &["score-mappings", "--config", "m.toml", "--out", "rank.csv"]);
    let rows: Vec<ScoreRow> = read_rows(fs::File::open(d.join("rank.csv")).unwrap()).unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r.profile.as_str()).collect();
    assert_eq!(names, ["clean-a", "clean-b", "quiet", "noisy"]);
    assert!(rows.windows(2).all(|w| w[0].score <= w[1].score));
    fs::write(d.join("one.toml"), "[[profile]]\nname = \"solo\"\n").unwrap();
    assert_eq!(run(d, &["score-mappings", "--config", "one.toml", "--out", "r.csv"]).status.code(), Some(2));
}

#[test]
fn replay_reproduces_and_detects_changed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::copy(table_path(), d.join("h2.csv")).unwrap();
    ok(d, &["sweep", "--family", "encoded", "--shots", "2048", "--seed", "3", "--grid", "17", "--noise-p", "0.03",
        "--readout-model", "default", "--unfold", "on", "--out", "t.csv"]);
    ok(d, &["curve", "--coeffs", "h2.csv", "--terms", "t.csv"]);
    let out = ok(d, &["replay", "t.curve.csv.manifest.json", "--out-dir", "again"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("identical"));
    ok(d, &["replay", "t.csv.manifest.json", "--out-dir", "again"]);
    for f in ["t.csv", "t.discards.json", "t.curve.csv"] {
        assert_eq!(fs::read(d.join(f)).unwrap(), fs::read(d.join("again").join(f)).unwrap(), "{f}");
    }
    fs::write(d.join("h2.csv"), "R,g1,g2,g3,g4,g5\n0.7,1,0,0,0,0\n").unwrap();
    let out = run(d, &["replay", "t.curve.csv.manifest.json", "--out-dir", "third"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!d.join("third").exists());
}
