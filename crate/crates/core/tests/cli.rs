use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maniac"));
    cmd.env_remove("MANIAC_SEED");
    cmd
}

fn manifest(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Drops the timing column, the only field allowed to differ between runs.
fn without_timing(csv: &str) -> String {
    csv.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string() + "\n").collect()
}

#[test]
fn mincut_reference() {
    let o = run(bin().args(["mincut", "--network"]).arg(manifest("configs/reference_network.json")));
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), r#"{"C1":4,"C2":4,"C":5}"#);
    let o = run(bin().args(["mincut", "--network", "reference"]));
    assert_eq!(stdout(&o).trim(), r#"{"C1":4,"C2":4,"C":5}"#);
}

#[test]
fn mincut_single_edge_and_missing_node() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single.json");
    std::fs::write(&single, r#"{"nodes":["S1","S2","R"],"edges":[["S1","R"]],"p":2}"#).unwrap();
    let o = run(bin().args(["mincut", "--network"]).arg(&single));
    assert_eq!(stdout(&o).trim(), r#"{"C1":1,"C2":0,"C":1}"#);

    let missing = dir.path().join("missing.json");
    std::fs::write(&missing, r#"{"nodes":["S1","R"],"edges":[["S1","R"]],"p":2}"#).unwrap();
    let o = run(bin().args(["mincut", "--network"]).arg(&missing));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("S2"));
}

#[test]
fn roundtrip_golden() {
    let o = run(bin().args(["roundtrip", "--seed", "42", "--config"]).arg(manifest("configs/coherent_z1.json")));
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(manifest("tests/golden/roundtrip_coherent_seed42.json")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn roundtrip_seed_from_environment() {
    let cfg = manifest("configs/coherent_z1.json");
    let flag = run(bin().args(["roundtrip", "--seed", "7", "--config"]).arg(&cfg));
    let env = run(bin().env("MANIAC_SEED", "7").args(["roundtrip", "--config"]).arg(&cfg));
    assert_eq!(stdout(&flag), stdout(&env));
    assert!(stdout(&env).contains("\"seed\": 7"));
}

#[test]
fn roundtrip_noiseless_and_rejections() {
    let o = run(bin().args(["roundtrip", "--config"]).arg(manifest("configs/noiseless.json")));
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"success\": true"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"network": "reference", "params": {"p": 257, "z": 1, "R1": 1, "R2": 2},
            "mode": "coherent", "adversary": {"kind": "fixed-edges", "edges": [0, 1]}}"#,
    )
    .unwrap();
    let o = run(bin().args(["roundtrip", "--config"]).arg(&bad));
    assert_eq!(o.status.code(), Some(2));

    let o = run(bin().args(["roundtrip", "--config", "/nonexistent/config.json"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn campaign_golden_and_reproducible() {
    let cfg = manifest("configs/noncoherent_z1.json");
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "4"] {
        let out = dir.path().join(format!("jobs{jobs}"));
        let o = run(bin()
            .args(["campaign", "--seed", "42", "--trials", "50", "--jobs", jobs, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out));
        assert!(o.status.success());
        let csv = std::fs::read_to_string(out.join("trials.csv")).unwrap();
        let summary = std::fs::read_to_string(out.join("summary.json")).unwrap();
        outputs.push((without_timing(&csv), summary));
    }
    assert_eq!(outputs[0], outputs[1]);
    let golden_csv = std::fs::read_to_string(manifest("tests/golden/campaign_noncoherent_seed42.csv")).unwrap();
    let golden_summary =
        std::fs::read_to_string(manifest("tests/golden/campaign_noncoherent_seed42.summary.json")).unwrap();
    assert_eq!(outputs[0].0, golden_csv);
    assert_eq!(outputs[0].1, golden_summary);

    let summary: serde_json::Value = serde_json::from_str(&outputs[0].1).unwrap();
    let rows: Vec<&str> = outputs[0].0.lines().skip(1).collect();
    let mean = rows.iter().filter(|r| r.split(',').nth(2) == Some("true")).count() as f64 / rows.len() as f64;
    assert_eq!(summary["success_rate"].as_f64().unwrap(), mean);
}

#[test]
fn single_trial_campaign_matches_roundtrip() {
    let cfg = manifest("configs/coherent_z1.json");
    let dir = tempfile::tempdir().unwrap();
    let o = run(bin()
        .args(["campaign", "--seed", "5", "--trials", "1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path()));
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    let row: Vec<String> = csv.lines().nth(1).unwrap().split(',').map(String::from).collect();

    let rt = run(bin().args(["roundtrip", "--seed", "5", "--config"]).arg(&cfg));
    let report: serde_json::Value = serde_json::from_str(&stdout(&rt)).unwrap();
    assert_eq!(row[1], report["trial_seed"].to_string());
    assert_eq!(row[2], report["success"].to_string());
    assert_eq!(row[4], report["rank_E"].to_string());
}
