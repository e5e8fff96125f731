use std::path::Path;
use std::process::Command;

use biphoton::experiment::{
    run, sample_counts, scan_csv, write_outputs, ExperimentConfig, ExperimentKind, MonteCarlo, Preset, MAX_SEED,
};
use biphoton::spectral::ScanResult;
use biphoton::units::LengthUnit;
use proptest::prelude::*;

fn biphoton() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_biphoton"));
    cmd.env_remove("BIPHOTON_OUT_DIR");
    cmd
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, cfg.to_text()).unwrap();
    path
}

fn short_scan() -> ExperimentConfig {
    ExperimentConfig {
        name: Some("short".into()),
        scan_start: -1000.0,
        scan_stop: 1000.0,
        scan_step: 20.0,
        ..Default::default()
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_scan().with_poisson(11);
    let path = write_config(dir.path(), &cfg);
    let mut outputs = Vec::new();
    for run_dir in ["a", "b"] {
        let out = dir.path().join(run_dir);
        let status = biphoton()
            .args(["run", "--config"])
            .arg(&path)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push((
            std::fs::read(out.join("short.csv")).unwrap(),
            std::fs::read(out.join("short.report.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(csv.starts_with("position_nm,rate,counts,stderr\n"));
    assert_eq!(csv.lines().count(), 1 + 101);
}

#[test]
fn library_outputs_are_deterministic() {
    let cfg = short_scan().with_poisson(3);
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    let (da, db) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (ca, ra) = write_outputs(da.path(), &a).unwrap();
    let (cb, rb) = write_outputs(db.path(), &b).unwrap();
    assert_eq!(std::fs::read(ca).unwrap(), std::fs::read(cb).unwrap());
    assert_eq!(std::fs::read(ra).unwrap(), std::fs::read(rb).unwrap());
}

#[test]
fn different_seeds_give_different_counts() {
    let a = run(&short_scan().with_poisson(1)).unwrap();
    let b = run(&short_scan().with_poisson(2)).unwrap();
    assert_ne!(scan_csv(a.scan.as_ref().unwrap()), scan_csv(b.scan.as_ref().unwrap()));
}

#[test]
fn poisson_mean_within_three_sigma() {
    let rate = 437.5;
    let integration_time = 0.2;
    let reps = 10_000u64;
    let mut total = 0u64;
    for seed in 0..reps {
        let mut scan = ScanResult::from_rates("delta_L2", LengthUnit::Nm, &[0.0], &[rate]).unwrap();
        sample_counts(&mut scan, integration_time, seed);
        total += scan.samples[0].counts.unwrap();
    }
    let mean_rate = total as f64 / reps as f64 / integration_time;
    let sigma = (rate * integration_time).sqrt() / integration_time / (reps as f64).sqrt();
    assert!(
        (mean_rate - rate).abs() < 3.0 * sigma,
        "{mean_rate} vs {rate} ± {sigma}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trips(
        kind in prop::sample::select(vec![ExperimentKind::Hom, ExperimentKind::MzOnePhoton, ExperimentKind::MzTwoPhoton]),
        linewidth in 1.0f64..1e9,
        bandwidth in 0.1f64..50.0,
        p in 0.0f64..=1.0,
        start in -1e6f64..0.0,
        step in 0.1f64..1e3,
        seed in prop::option::of(0..=MAX_SEED),
        points in (1usize..5000).prop_map(|n| 2 * n + 1),
    ) {
        let mut cfg = ExperimentConfig {
            experiment: kind,
            pump_linewidth_hz: linewidth,
            filter_bandwidth_nm: bandwidth,
            distinguishability: p,
            scan_start: start,
            scan_stop: start + 100.0 * step,
            scan_step: step,
            grid_points: points,
            ..Default::default()
        };
        if let Some(s) = seed {
            cfg = cfg.with_poisson(s);
        }
        prop_assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }
}

#[test]
fn presets_round_trip() {
    for p in [Preset::Fig3, Preset::Fig4, Preset::Fig5] {
        for cfg in p.configs() {
            assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
        }
    }
}

#[test]
fn exit_code_zero_on_success() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        experiment: ExperimentKind::OracleCheck,
        oracle_points: Some(50),
        ..Default::default()
    };
    let path = write_config(dir.path(), &cfg);
    let out = biphoton()
        .args(["run", "--config"])
        .arg(&path)
        .env("BIPHOTON_OUT_DIR", dir.path().join("env_out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // output directory taken from the environment
    let csv = std::fs::read_to_string(dir.path().join("env_out/oracle_check.csv")).unwrap();
    assert!(csv.starts_with("formula,scale,max_abs_deviation,rms_deviation\n"));
}

#[test]
fn exit_code_one_on_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = dir.path().join("bad_key.toml");
    std::fs::write(&bad_key, format!("{}pump_linewdith_hz = 1.0\n", short_scan().to_text())).unwrap();
    let bad_value = write_config(
        dir.path(),
        &ExperimentConfig {
            scan_step: -1.0,
            ..short_scan()
        },
    );
    let cases: Vec<Vec<std::ffi::OsString>> = vec![
        vec!["run".into(), "--config".into(), bad_key.into()],
        vec!["run".into(), "--config".into(), bad_value.into()],
        vec!["run".into(), "--config".into(), dir.path().join("missing.toml").into()],
        vec!["run".into(), "--preset".into(), "fig9".into()],
        vec![
            "run".into(),
            "--format".into(),
            "xml".into(),
            "--preset".into(),
            "fig4".into(),
        ],
        vec!["run".into()],
        vec![
            "run".into(),
            "--seed".into(),
            u64::MAX.to_string().into(),
            "--preset".into(),
            "fig4".into(),
        ],
    ];
    for args in cases {
        let out = biphoton().args(&args).arg("--out").arg(dir.path()).output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn exit_code_two_on_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    // valid config, but too few grid points across the filter band
    let path = write_config(
        dir.path(),
        &ExperimentConfig {
            grid_points: 11,
            ..short_scan()
        },
    );
    let out = biphoton()
        .args(["run", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn seed_flag_turns_on_monte_carlo() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &short_scan());
    let status = biphoton()
        .args(["run", "--seed", "5", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("short.report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["monte_carlo"], "poisson");
    assert_eq!(report["config"]["seed"], 5);
    let csv = std::fs::read_to_string(dir.path().join("short.csv")).unwrap();
    assert!(csv.starts_with("position_nm,rate,counts,stderr\n"));
}

#[test]
fn show_preset_prints_parseable_configs() {
    let out = biphoton().args(["show-preset", "fig5"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let blocks: Vec<&str> = text.split("# ").filter(|b| !b.trim().is_empty()).collect();
    assert_eq!(blocks.len(), 2);
    for b in blocks {
        let body = b.split_once('\n').unwrap().1;
        let cfg = ExperimentConfig::parse(body).unwrap();
        assert_eq!(cfg.monte_carlo, MonteCarlo::Off);
    }
}
