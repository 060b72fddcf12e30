use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kerr_spin_cli::captions::{caption_config, equatorial_config, CAPTIONS, CAPTION_A, CAPTION_M};
use kerr_spin_cli::config::RunConfig;
use kerr_spin_cli::csvio::{read_rows, HEADER};
use kerr_spin_cli::figures::UNDEFINED_NOTE;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn kerrspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerrspin")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, cfg: &RunConfig) -> PathBuf {
    let path = dir.join(format!("{}.toml", cfg.output.name));
    std::fs::write(&path, cfg.to_toml()).unwrap();
    path
}

fn simulate(config: &Path, out: &Path) -> Output {
    kerrspin(&["simulate", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

#[test]
fn shipped_configs_match_the_captions() {
    let mut expected: Vec<RunConfig> = (0..CAPTIONS.len()).map(|i| caption_config(i, CAPTION_M, CAPTION_A)).collect();
    expected.push(equatorial_config(CAPTION_M, CAPTION_A));
    for want in expected {
        let path = configs_dir().join(format!("{}.toml", want.output.name));
        let got = RunConfig::load(&path).unwrap().validate().unwrap();
        let want = want.validate().unwrap();
        assert_eq!(got.params, want.params, "{}", path.display());
        assert_eq!(got.constants, want.constants, "{}", path.display());
        assert_eq!(got.integrator, want.integrator, "{}", path.display());
        assert_eq!(got.raw.initial, want.raw.initial, "{}", path.display());
        assert_eq!(got.spin, want.spin, "{}", path.display());
    }
}

#[test]
fn simulate_is_reproducible_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs_dir().join("fig3.toml");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(code(&simulate(&config, &a)), 0);
    assert_eq!(code(&simulate(&config, &b)), 0);
    let csv_a = std::fs::read(a.join("fig3.csv")).unwrap();
    assert_eq!(csv_a, std::fs::read(b.join("fig3.csv")).unwrap());
    assert!(!csv_a.contains(&b'\r'));
    let rows = read_rows(csv_a.as_slice()).unwrap();
    assert_eq!(rows.len(), 50001);
    assert_eq!(String::from_utf8_lossy(&csv_a).lines().next().unwrap(), HEADER.join(","));

    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("fig3_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["tolerances_met"], true);
    assert_eq!(summary["samples"], 50001);
    assert!(summary["error"].is_null());
}

#[test]
fn equatorial_csv_leaves_curvature_empty() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = equatorial_config(CAPTION_M, CAPTION_A);
    cfg.integration.tau_max = 20.0;
    let path = write_config(dir.path(), &cfg);
    let out = dir.path().join("out");
    assert_eq!(code(&simulate(&path, &out)), 0);
    let text = std::fs::read_to_string(out.join("equatorial.csv")).unwrap();
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').nth(11), Some(""));
    }
}

#[test]
fn figures_writes_three_self_contained_panels() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in [caption_config(1, CAPTION_M, CAPTION_A), equatorial_config(CAPTION_M, CAPTION_A)] {
        let mut cfg = cfg;
        cfg.integration.tau_max = 30.0;
        let path = write_config(dir.path(), &cfg);
        let out = kerrspin(&["figures", "--config", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let name = &cfg.output.name;
        for suffix in ["orbit_polar", "orbit_3d", "kg"] {
            let svg = std::fs::read_to_string(dir.path().join(format!("{name}_{suffix}.svg"))).unwrap();
            assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
            assert!(!svg.contains("href"));
        }
        let kg = std::fs::read_to_string(dir.path().join(format!("{name}_kg.svg"))).unwrap();
        assert_eq!(kg.contains(UNDEFINED_NOTE), name == "equatorial");
    }
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let missing = simulate(&dir.path().join("missing.toml"), &out);
    assert_eq!(code(&missing), 2);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[params]\nM = 1.0\n").unwrap();
    assert_eq!(code(&simulate(&bad, &out)), 2);

    let extreme = write_config(dir.path(), &caption_config(0, 1.0, 1.0));
    let res = simulate(&extreme, &out);
    assert_eq!(code(&res), 2);
    assert!(stderr(&res).contains("non-extreme case violated"), "{}", stderr(&res));

    let forbidden = write_config(dir.path(), &caption_config(1, 1.0, 0.8));
    let res = simulate(&forbidden, &out);
    assert_eq!(code(&res), 2);
    assert!(stderr(&res).contains("forbidden region"), "{}", stderr(&res));

    assert_eq!(code(&kerrspin(&["simulate"])), 2);
    assert_eq!(code(&kerrspin(&["validate", "--seed", "x"])), 2);
    let res = kerrspin(&["validate", "--seed", "1", "--params", "M=1,a=1.5"]);
    assert_eq!(code(&res), 2);
    assert!(stderr(&res).contains("non-extreme case violated"));
}

#[test]
fn plunge_exits_with_three_and_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = caption_config(0, 1.0, 0.5);
    cfg.constants.energy = 1.0;
    cfg.constants.angular_momentum = 0.5;
    cfg.constants.kappa = 1.0;
    cfg.initial.r0 = 10.0;
    cfg.initial.theta0 = 1.3;
    cfg.initial.sign_r = -1;
    cfg.output.name = "plunge".into();
    let path = write_config(dir.path(), &cfg);
    let out = dir.path().join("out");
    let res = simulate(&path, &out);
    assert_eq!(code(&res), 3);
    assert!(stderr(&res).contains("geodesic-integrator at tau ="), "{}", stderr(&res));
    let rows = read_rows(std::fs::File::open(out.join("plunge.csv")).unwrap()).unwrap();
    assert!(rows.len() > 10);
}

#[test]
fn unmet_tolerance_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = caption_config(0, CAPTION_M, CAPTION_A);
    cfg.integration.tau_max = 20.0;
    cfg.integration.drift_tolerance = 1e-30;
    let path = write_config(dir.path(), &cfg);
    let res = simulate(&path, &dir.path().join("out"));
    assert_eq!(code(&res), 1);
    let summary: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(summary["tolerances_met"], false);
}

#[test]
fn validate_reports_json() {
    for args in [&["validate", "--seed", "3"][..], &["validate", "--seed", "4", "--params", "M=1,a=0.6"]] {
        let res = kerrspin(args);
        assert_eq!(code(&res), 0, "{}", stderr(&res));
        let report: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
        assert_eq!(report["pass"], true);
        let checks = report["checks"].as_array().unwrap();
        assert!(checks.len() > 40);
        assert!(checks.iter().all(|c| c["pass"] == true || c["informational"] == true));
    }
}
