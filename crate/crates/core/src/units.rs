//! Unit conventions. Lengths are nanometres and frequencies terahertz
//! internally; with those units `c` is in nm·THz and a path difference in nm
//! divided by `c` is a delay in picoseconds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Speed of light in nm·THz.
pub const SPEED_OF_LIGHT_NM_THZ: f64 = SPEED_OF_LIGHT_M_S * 1e-3;

pub fn nm_to_thz(wavelength_nm: f64) -> f64 {
    SPEED_OF_LIGHT_NM_THZ / wavelength_nm
}

pub fn thz_to_nm(frequency_thz: f64) -> f64 {
    SPEED_OF_LIGHT_NM_THZ / frequency_thz
}

/// Small wavelength interval around `center_nm` as a frequency interval, `cΔλ/λ²`.
pub fn bandwidth_nm_to_thz(center_nm: f64, width_nm: f64) -> f64 {
    SPEED_OF_LIGHT_NM_THZ * width_nm / (center_nm * center_nm)
}

pub fn hz_to_thz(hz: f64) -> f64 {
    hz * 1e-12
}

/// Delay in ps for a path difference in nm.
pub fn delay_ps(path_nm: f64) -> f64 {
    path_nm / SPEED_OF_LIGHT_NM_THZ
}

/// Unit of scan positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    Nm,
    Um,
}

impl LengthUnit {
    pub fn to_nm(self, value: f64) -> f64 {
        match self {
            LengthUnit::Nm => value,
            LengthUnit::Um => value * 1e3,
        }
    }

    pub fn from_nm(self, nm: f64) -> f64 {
        match self {
            LengthUnit::Nm => nm,
            LengthUnit::Um => nm * 1e-3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LengthUnit::Nm => "nm",
            LengthUnit::Um => "um",
        }
    }
}

impl fmt::Display for LengthUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for LengthUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nm" => Ok(LengthUnit::Nm),
            "um" | "μm" => Ok(LengthUnit::Um),
            other => Err(format!("unknown length unit {other:?}")),
        }
    }
}
