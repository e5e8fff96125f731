//! Experiment configuration: a flat `key = value` file (TOML syntax), one
//! key per physical or operational parameter. Unknown keys are rejected.
//!
//! ```text
//! experiment = "mz_two_photon"   # hom | mz_one_photon | mz_two_photon | oracle_check
//! name = "fig4_two_photon"       # output file stem (optional)
//! pump_wavelength_nm = 861.6     # fundamental λ₀; the pump is its second harmonic
//! pump_linewidth_hz = 40000000.0 # Δν₀, intensity FWHM
//! pump_shape = "gaussian"        # delta | gaussian
//! filter_center_nm = 860.0
//! filter_bandwidth_nm = 10.0
//! filter_shape = "rectangular"   # rectangular | gaussian
//! phasematch_bandwidth_nm = 20.0 # 0 = single frequency, inf = flat
//! distinguishability = 0.97      # interfering fraction p
//! scan_start = -2500.0
//! scan_stop = 2500.0
//! scan_step = 43.0
//! scan_unit = "nm"               # nm | um
//! rate_scale = 1000.0            # counts/s per unit expectation value
//! integration_time = 1.0         # s
//! monte_carlo = "off"            # off | poisson
//! seed = 7                       # required iff monte_carlo = "poisson"
//! grid_points = 4001             # odd
//! alpha = 0.5                    # oracle_check only: coherent amplitude |α|
//! oracle_points = 1000           # oracle_check only: φ samples over [0, 4π)
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::{FilterShape, PumpShape};
use crate::units::LengthUnit;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("unknown preset {0:?} (expected fig3, fig4 or fig5)")]
    UnknownPreset(String),
}

fn field(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        reason: reason.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Hom,
    MzOnePhoton,
    MzTwoPhoton,
    OracleCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Hom => "hom",
            ExperimentKind::MzOnePhoton => "mz_one_photon",
            ExperimentKind::MzTwoPhoton => "mz_two_photon",
            ExperimentKind::OracleCheck => "oracle_check",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonteCarlo {
    Off,
    Poisson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub pump_wavelength_nm: f64,
    pub pump_linewidth_hz: f64,
    pub pump_shape: PumpShape,
    pub filter_center_nm: f64,
    pub filter_bandwidth_nm: f64,
    pub filter_shape: FilterShape,
    pub phasematch_bandwidth_nm: f64,
    pub distinguishability: f64,
    pub scan_start: f64,
    pub scan_stop: f64,
    pub scan_step: f64,
    pub scan_unit: LengthUnit,
    pub rate_scale: f64,
    pub integration_time: f64,
    pub monte_carlo: MonteCarlo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub grid_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_points: Option<usize>,
}

pub const DEFAULT_RATE_SCALE: f64 = 1000.0;
pub const DEFAULT_INTEGRATION_TIME: f64 = 1.0;
pub const DEFAULT_ORACLE_POINTS: usize = 1000;
pub const DEFAULT_ORACLE_ALPHA: f64 = 0.5;
/// Config files store integers as signed 64-bit values.
pub const MAX_SEED: u64 = i64::MAX as u64;

impl Default for ExperimentConfig {
    /// Experimental parameters of the biphoton setup with a two-photon fringe
    /// scan around zero path difference.
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::MzTwoPhoton,
            name: None,
            pump_wavelength_nm: 861.6,
            pump_linewidth_hz: 40e6,
            pump_shape: PumpShape::Gaussian,
            filter_center_nm: 860.0,
            filter_bandwidth_nm: 10.0,
            filter_shape: FilterShape::Rectangular,
            phasematch_bandwidth_nm: 20.0,
            distinguishability: 0.97,
            scan_start: -2500.0,
            scan_stop: 2500.0,
            scan_step: 43.0,
            scan_unit: LengthUnit::Nm,
            rate_scale: DEFAULT_RATE_SCALE,
            integration_time: DEFAULT_INTEGRATION_TIME,
            monte_carlo: MonteCarlo::Off,
            seed: None,
            grid_points: crate::spectral::DEFAULT_GRID_POINTS,
            alpha: None,
            oracle_points: None,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Panics on a seed above [`MAX_SEED`], which [`Self::validate`] rejects.
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("flat config serializes")
    }

    /// Output file stem: `name`, or the experiment kind.
    pub fn stem(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.experiment.name().to_string())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(field(name, format!("must be positive and finite, got {v}")))
            }
        };
        if let Some(n) = &self.name {
            if n.is_empty() || n.contains(['/', '\\']) || n.starts_with('.') {
                return Err(field("name", format!("{n:?} is not a plain file stem")));
            }
        }
        positive("pump_wavelength_nm", self.pump_wavelength_nm)?;
        if !(self.pump_linewidth_hz >= 0.0 && self.pump_linewidth_hz.is_finite()) {
            return Err(field("pump_linewidth_hz", "must be ≥ 0 and finite"));
        }
        if self.pump_shape == PumpShape::Gaussian && self.pump_linewidth_hz == 0.0 {
            return Err(field("pump_linewidth_hz", "a gaussian pump needs a positive linewidth"));
        }
        positive("filter_center_nm", self.filter_center_nm)?;
        positive("filter_bandwidth_nm", self.filter_bandwidth_nm)?;
        if self.filter_bandwidth_nm >= 2.0 * self.filter_center_nm {
            return Err(field(
                "filter_bandwidth_nm",
                "must be below twice the centre wavelength",
            ));
        }
        if !(self.phasematch_bandwidth_nm >= 0.0) {
            return Err(field("phasematch_bandwidth_nm", "must be ≥ 0 (inf allowed)"));
        }
        if !(0.0..=1.0).contains(&self.distinguishability) {
            return Err(field("distinguishability", "must lie in [0, 1]"));
        }
        if !self.scan_start.is_finite() {
            return Err(field("scan_start", "must be finite"));
        }
        if !(self.scan_stop.is_finite() && self.scan_stop >= self.scan_start) {
            return Err(field("scan_stop", "must be finite and ≥ scan_start"));
        }
        positive("scan_step", self.scan_step)?;
        if (self.scan_stop - self.scan_start) / self.scan_step > 1e7 {
            return Err(field("scan_step", "more than 10⁷ scan points"));
        }
        positive("rate_scale", self.rate_scale)?;
        positive("integration_time", self.integration_time)?;
        match (self.monte_carlo, self.seed) {
            (MonteCarlo::Poisson, None) => return Err(field("seed", "required when monte_carlo = \"poisson\"")),
            (MonteCarlo::Off, Some(_)) => return Err(field("seed", "only allowed when monte_carlo = \"poisson\"")),
            (_, Some(seed)) if seed > MAX_SEED => return Err(field("seed", format!("must be at most {MAX_SEED}"))),
            _ => {}
        }
        if self.grid_points < 3 || self.grid_points.is_multiple_of(2) {
            return Err(field("grid_points", "must be odd and at least 3"));
        }
        let oracle = self.experiment == ExperimentKind::OracleCheck;
        if let Some(a) = self.alpha {
            if !oracle {
                return Err(field("alpha", "only used by oracle_check"));
            }
            if !(a >= 0.0 && a.is_finite()) {
                return Err(field("alpha", "must be ≥ 0 and finite"));
            }
        }
        if let Some(n) = self.oracle_points {
            if !oracle {
                return Err(field("oracle_points", "only used by oracle_check"));
            }
            if n == 0 {
                return Err(field("oracle_points", "must be positive"));
            }
        }
        Ok(())
    }

    /// Monte Carlo with the given seed.
    pub fn with_poisson(mut self, seed: u64) -> Self {
        self.monte_carlo = MonteCarlo::Poisson;
        self.seed = Some(seed);
        self
    }
}

/// Ready-made scans of the standard setup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// HOM dip behind the first splitter, ±150 μm.
    Fig3,
    /// One- and two-photon fringes around ΔL₂ = 0.
    Fig4,
    /// One- and two-photon fringes around ΔL₂ = 400 μm.
    Fig5,
}

impl FromStr for Preset {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            other => Err(ConfigError::UnknownPreset(other.to_string())),
        }
    }
}

impl Preset {
    pub fn configs(self) -> Vec<ExperimentConfig> {
        let base = ExperimentConfig::default();
        let fringe = |experiment, name: &str, start: f64, stop: f64| ExperimentConfig {
            experiment,
            name: Some(name.to_string()),
            scan_start: start,
            scan_stop: stop,
            scan_step: 43.0,
            scan_unit: LengthUnit::Nm,
            ..base.clone()
        };
        match self {
            Preset::Fig3 => vec![ExperimentConfig {
                experiment: ExperimentKind::Hom,
                name: Some("fig3_hom".into()),
                scan_start: -150.0,
                scan_stop: 150.0,
                scan_step: 2.0,
                scan_unit: LengthUnit::Um,
                ..base
            }],
            Preset::Fig4 => vec![
                fringe(ExperimentKind::MzOnePhoton, "fig4_one_photon", -2500.0, 2500.0),
                fringe(ExperimentKind::MzTwoPhoton, "fig4_two_photon", -2500.0, 2500.0),
            ],
            Preset::Fig5 => vec![
                fringe(ExperimentKind::MzOnePhoton, "fig5_one_photon", 397_500.0, 402_500.0),
                fringe(ExperimentKind::MzTwoPhoton, "fig5_two_photon", 397_500.0, 402_500.0),
            ],
        }
    }
}
