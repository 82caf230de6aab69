use std::process::Command;

fn nlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nlab")).args(args).output().expect("binary runs")
}

#[test]
fn constants_for_the_plane() {
    let out = nlab(&["constants", "--dim", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["pleijel_constant"].as_f64().unwrap() - 0.69166).abs() < 1e-4);
    assert!((v["omega_n"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn lattice_oracle_counts() {
    let out = nlab(&["oracle", "lattice", "--lambda-max", "2000"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dirichlet"], 1529);
    assert_eq!(v["neumann"], 1618);
}

#[test]
fn bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"domain": {"shape": "disk", "radius": 1, "resolution": 20}, "K": 30, "checks": ["nope"]}"#).unwrap();
    let out = nlab(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check"));
    assert_eq!(nlab(&["run", "--preset", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn small_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"domain": {"shape": "rectangle", "width": 3.141592653589793, "height": 3.141592653589793,
            "resolution": 7.639437268410976}, "bc": "dirichlet", "K": 8, "seed": 3,
            "checks": ["courant", "polya_szego"]}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = nlab(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    let csv = std::fs::read_to_string(out_dir.join("series.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2 + 8);
}
