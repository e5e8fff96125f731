//! Configuration-driven runner behind the `biphoton` binary.
//!
//! [`run`] evaluates one [`ExperimentConfig`] into a [`RunOutput`]: the scan
//! (rates scaled to counts/s, optionally with Poisson counts), a fitted
//! summary and a [`RunReport`]. [`write_outputs`] then writes
//! `<stem>.csv` and `<stem>.report.json`. Identical configs, seed included,
//! give byte-identical files.

mod config;
mod oracle;

pub use config::{
    ConfigError, ExperimentConfig, ExperimentKind, MonteCarlo, Preset, DEFAULT_INTEGRATION_TIME, DEFAULT_ORACLE_ALPHA,
    DEFAULT_ORACLE_POINTS, DEFAULT_RATE_SCALE, MAX_SEED,
};
pub use oracle::{compare_oracles, phi_grid, pipeline_rates, DeviationRow, DeviationTable, ORACLE_MIN_TRUNCATION};

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::fit::{fit_fringe_samples, fit_hom_dip, DipSummary, FitOptions, FringeSummary};
use crate::optics::Distinguishability;
use crate::spectral::{
    build_biphoton, coherence_lengths, hom_scan, mz_one_photon_scan, mz_two_photon_scan, scan_positions,
    BiphotonSpectralAmplitude, CoherenceLengths, FilterSpectrum, PumpSpectrum, ScanResult, SpectralGrid,
};
use crate::Result;

pub const SOFTWARE_VERSION: &str = concat!("biphoton ", env!("CARGO_PKG_VERSION"));

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BIPHOTON_OUT_DIR";

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub software: String,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fringe: Option<FringeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dip: Option<DipSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<DeviationTable>,
    pub coherence_lengths: CoherenceLengths,
    pub samples: usize,
    pub notes: Vec<String>,
    /// Kept out of the report file so reruns stay byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub scan: Option<ScanResult>,
    pub report: RunReport,
}

fn spectra(config: &ExperimentConfig) -> Result<(PumpSpectrum, FilterSpectrum)> {
    let pump = PumpSpectrum::new(config.pump_wavelength_nm, config.pump_linewidth_hz, config.pump_shape)?;
    let filter = FilterSpectrum::new(config.filter_shape, config.filter_center_nm, config.filter_bandwidth_nm)?;
    Ok((pump, filter))
}

/// Builds the joint spectrum described by a config.
pub fn biphoton_for(config: &ExperimentConfig) -> Result<BiphotonSpectralAmplitude> {
    let (pump, filter) = spectra(config)?;
    let grid = SpectralGrid::for_filter(&pump, &filter, config.grid_points)?;
    build_biphoton(&pump, config.phasematch_bandwidth_nm, &filter, &grid)
}

/// Runs one validated config. Fails only on numerical problems.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let (pump, filter) = spectra(config)?;
    let mut notes = Vec::new();
    if config.rate_scale == DEFAULT_RATE_SCALE {
        notes.push("rate_scale = 1000 counts/s is an artifact default, not a measured value".to_string());
    }
    if config.integration_time == DEFAULT_INTEGRATION_TIME {
        notes.push("integration_time = 1 s is an artifact default, not a measured value".to_string());
    }

    let mut report = RunReport {
        software: SOFTWARE_VERSION.to_string(),
        config: config.clone(),
        fringe: None,
        dip: None,
        oracle: None,
        coherence_lengths: coherence_lengths(&filter, &pump),
        samples: 0,
        notes,
        wall_time: Duration::ZERO,
    };

    if config.experiment == ExperimentKind::OracleCheck {
        let n = config.oracle_points.unwrap_or(DEFAULT_ORACLE_POINTS);
        let alpha = Complex64::new(config.alpha.unwrap_or(DEFAULT_ORACLE_ALPHA), 0.0);
        report.oracle = Some(compare_oracles(&phi_grid(n), alpha)?);
        report.samples = n;
        report.wall_time = started.elapsed();
        return Ok(RunOutput { scan: None, report });
    }

    let bsa = biphoton_for(config)?;
    let positions = scan_positions(config.scan_start, config.scan_stop, config.scan_step)?;
    let p = Distinguishability::new(config.distinguishability)?;
    let unit = config.scan_unit;
    let mut scan = match config.experiment {
        ExperimentKind::Hom => hom_scan(&bsa, &positions, unit, p)?,
        ExperimentKind::MzOnePhoton => mz_one_photon_scan(&bsa, &positions, unit, p)?,
        ExperimentKind::MzTwoPhoton => mz_two_photon_scan(&bsa, &positions, unit, p)?,
        ExperimentKind::OracleCheck => unreachable!(),
    };
    for s in &mut scan.samples {
        s.rate *= config.rate_scale;
    }
    if let (MonteCarlo::Poisson, Some(seed)) = (config.monte_carlo, config.seed) {
        sample_counts(&mut scan, config.integration_time, seed);
    }

    // fit on what a detector would report: counts per second when sampled
    let observed: Vec<f64> = scan
        .samples
        .iter()
        .map(|s| match s.counts {
            Some(c) => c as f64 / config.integration_time,
            None => s.rate,
        })
        .collect();
    let observed_scan = ScanResult::from_rates(scan.axis_label.clone(), unit, &scan.positions(), &observed)?;
    match config.experiment {
        ExperimentKind::Hom => report.dip = Some(fit_hom_dip(&observed_scan)?),
        _ => {
            report.fringe = Some(fit_fringe_samples(
                &observed_scan.positions_nm(),
                &observed,
                None,
                FitOptions::default(),
            )?)
        }
    }
    report.samples = scan.len();
    report.wall_time = started.elapsed();
    Ok(RunOutput {
        scan: Some(scan),
        report,
    })
}

/// Draws Poisson counts with mean `rate × integration_time` per sample, in
/// sample order, and sets `stderr = √counts`.
pub fn sample_counts(scan: &mut ScanResult, integration_time: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in &mut scan.samples {
        let mean = s.rate * integration_time;
        let counts = if mean > 0.0 {
            Poisson::new(mean).expect("positive finite mean").sample(&mut rng) as u64
        } else {
            0
        };
        s.counts = Some(counts);
        s.stderr = Some((counts as f64).sqrt());
    }
}

/// `position_<unit>,rate[,counts,stderr]`, 12 significant digits.
pub fn scan_csv(scan: &ScanResult) -> String {
    let with_counts = scan.samples.iter().any(|s| s.counts.is_some());
    let mut out = format!("position_{},rate", scan.unit.label());
    if with_counts {
        out.push_str(",counts,stderr");
    }
    out.push('\n');
    for s in &scan.samples {
        write!(out, "{:.11e},{:.11e}", s.position, s.rate).unwrap();
        if with_counts {
            write!(out, ",{},{:.11e}", s.counts.unwrap_or(0), s.stderr.unwrap_or(0.0)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// `formula,scale,max_abs_deviation,rms_deviation`, 12 significant digits.
pub fn deviation_csv(table: &DeviationTable) -> String {
    let mut out = String::from("formula,scale,max_abs_deviation,rms_deviation\n");
    for r in &table.rows {
        writeln!(out, "{},{:.11e},{:.11e},{:.11e}", r.formula, r.scale, r.max_abs, r.rms).unwrap();
    }
    out
}

pub fn report_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Writes `<stem>.csv` and `<stem>.report.json` under `dir`, creating it if
/// needed. Returns the two paths.
pub fn write_outputs(dir: &Path, output: &RunOutput) -> io::Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let stem = output.report.config.stem();
    let csv_path = dir.join(format!("{stem}.csv"));
    let report_path = dir.join(format!("{stem}.report.json"));
    let csv = match (&output.scan, &output.report.oracle) {
        (Some(scan), _) => scan_csv(scan),
        (None, Some(table)) => deviation_csv(table),
        (None, None) => String::new(),
    };
    fs::write(&csv_path, csv)?;
    fs::write(&report_path, report_json(&output.report))?;
    Ok((csv_path, report_path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ScanSample;
    use crate::units::LengthUnit;

    #[test]
    fn csv_layout() {
        let scan = ScanResult::new(
            "delta_L2",
            LengthUnit::Um,
            vec![
                ScanSample {
                    position: -1.5,
                    rate: 250.0,
                    counts: None,
                    stderr: None,
                },
                ScanSample {
                    position: 0.0,
                    rate: 0.0,
                    counts: None,
                    stderr: None,
                },
            ],
        )
        .unwrap();
        assert_eq!(
            scan_csv(&scan),
            "position_um,rate\n-1.50000000000e0,2.50000000000e2\n0.00000000000e0,0.00000000000e0\n"
        );
    }

    #[test]
    fn poisson_columns() {
        let mut scan = ScanResult::from_rates("x", LengthUnit::Nm, &[0.0, 1.0], &[100.0, 0.0]).unwrap();
        sample_counts(&mut scan, 1.0, 42);
        assert_eq!(scan.samples[1].counts, Some(0));
        let c = scan.samples[0].counts.unwrap();
        assert_eq!(scan.samples[0].stderr, Some((c as f64).sqrt()));
        let text = scan_csv(&scan);
        assert!(text.starts_with("position_nm,rate,counts,stderr\n"));
    }

    #[test]
    fn oracle_check_run() {
        let cfg = ExperimentConfig {
            experiment: ExperimentKind::OracleCheck,
            oracle_points: Some(100),
            ..Default::default()
        };
        cfg.validate().unwrap();
        let out = run(&cfg).unwrap();
        assert!(out.scan.is_none());
        assert!(out.report.oracle.as_ref().unwrap().max_deviation() < 1e-8);
    }
}
