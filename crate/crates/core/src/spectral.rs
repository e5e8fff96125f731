//! Multi-frequency biphoton model and frequency-resolved scans.
//!
//! The pump is the second harmonic of a laser at `λ₀`, so a down-converted
//! pair satisfies `ν_s + ν_i = 2ν₀ + ε` with `ε` drawn from the pump line.
//! Pairs are parameterized by that sum offset `ε` and the detuning `δ`:
//!
//! ```text
//! ν_s = ν₀ + ε/2 + δ,   ν_i = ν₀ + ε/2 − δ
//! ```
//!
//! A monochromatic pump has a single slice `ε = 0`; a gaussian pump is
//! sampled on a small set of `ε` nodes. Within a slice the joint intensity
//! `|A(δ)|²` is a piecewise-linear [`Density`] whose nodes are the grid
//! detunings plus the exact edges of a rectangular filter, so hard band
//! edges cost no accuracy.
//!
//! Scan rates are expectation values normalized so a fully washed-out fringe
//! (or the HOM baseline) sits at ½.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::optics::Distinguishability;
use crate::quadrature::Density;
use crate::units::{self, LengthUnit};
use crate::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 4001;
pub const MIN_POINTS_ACROSS_FILTER: usize = 32;
/// Pump-offset nodes used for a gaussian pump line.
pub const PUMP_NODES: usize = 41;
/// A gaussian pump line is sampled out to this many FWHM either side.
const PUMP_SPAN_FWHM: f64 = 3.0;

/// Uniform detuning grid around the degenerate frequency `ν₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralGrid {
    pub center_thz: f64,
    pub span_thz: f64,
    pub points: usize,
}

impl SpectralGrid {
    pub fn new(center_thz: f64, span_thz: f64, points: usize) -> Result<Self> {
        if !(center_thz > 0.0 && span_thz > 0.0) {
            return Err(Error::InvalidSpectral(format!(
                "grid center {center_thz} THz and span {span_thz} THz must be positive"
            )));
        }
        if points < 3 || points.is_multiple_of(2) {
            return Err(Error::InvalidSpectral(format!(
                "grid points must be odd and at least 3, got {points}"
            )));
        }
        Ok(SpectralGrid {
            center_thz,
            span_thz,
            points,
        })
    }

    /// Grid centred on the pump's degenerate frequency, wide enough for the
    /// filter: the rectangular band plus half a bandwidth of margin, or three
    /// FWHM either side of a gaussian filter, and never under four bandwidths.
    pub fn for_filter(pump: &PumpSpectrum, filter: &FilterSpectrum, points: usize) -> Result<Self> {
        let nu0 = pump.degenerate_thz();
        let (lo, hi) = filter.band_thz();
        let bw = hi - lo;
        let reach = (lo - nu0).abs().max((hi - nu0).abs());
        let half = match filter.shape {
            FilterShape::Rectangular => reach + 0.5 * bw,
            FilterShape::Gaussian => reach + 2.5 * bw,
        };
        Self::new(nu0, (2.0 * half).max(4.0 * bw), points)
    }

    pub fn with_points(&self, points: usize) -> Result<Self> {
        Self::new(self.center_thz, self.span_thz, points)
    }

    pub fn spacing(&self) -> f64 {
        self.span_thz / (self.points - 1) as f64
    }

    /// Detunings from the centre, symmetric, including 0.
    pub fn detunings(&self) -> Vec<f64> {
        let h = self.spacing();
        let half = (self.points / 2) as isize;
        (-half..=half).map(|i| i as f64 * h).collect()
    }

    fn half_span(&self) -> f64 {
        self.span_thz / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterShape {
    Rectangular,
    Gaussian,
}

impl fmt::Display for FilterShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterShape::Rectangular => "rectangular",
            FilterShape::Gaussian => "gaussian",
        })
    }
}

impl FromStr for FilterShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rectangular" => Ok(FilterShape::Rectangular),
            "gaussian" => Ok(FilterShape::Gaussian),
            other => Err(format!("unknown filter shape {other:?}")),
        }
    }
}

/// Interference filter in front of the detectors.
///
/// A rectangular filter passes `λ_c ± Δλ/2` exactly; a gaussian filter has
/// intensity FWHM `cΔλ/λ_c²` in frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterSpectrum {
    pub shape: FilterShape,
    pub center_nm: f64,
    pub bandwidth_nm: f64,
}

impl FilterSpectrum {
    pub fn new(shape: FilterShape, center_nm: f64, bandwidth_nm: f64) -> Result<Self> {
        if !(center_nm > 0.0) || !(bandwidth_nm > 0.0) || bandwidth_nm >= 2.0 * center_nm {
            return Err(Error::InvalidSpectral(format!(
                "filter center {center_nm} nm / bandwidth {bandwidth_nm} nm out of range"
            )));
        }
        Ok(FilterSpectrum {
            shape,
            center_nm,
            bandwidth_nm,
        })
    }

    pub fn center_thz(&self) -> f64 {
        units::nm_to_thz(self.center_nm)
    }

    /// Pass band in THz: exact edges for a rectangle, `±FWHM/2` for a gaussian.
    pub fn band_thz(&self) -> (f64, f64) {
        match self.shape {
            FilterShape::Rectangular => (
                units::nm_to_thz(self.center_nm + self.bandwidth_nm / 2.0),
                units::nm_to_thz(self.center_nm - self.bandwidth_nm / 2.0),
            ),
            FilterShape::Gaussian => {
                let w = self.fwhm_thz();
                (self.center_thz() - w / 2.0, self.center_thz() + w / 2.0)
            }
        }
    }

    fn fwhm_thz(&self) -> f64 {
        units::bandwidth_nm_to_thz(self.center_nm, self.bandwidth_nm)
    }

    /// Intensity transmission in `[0, 1]`.
    pub fn transmission(&self, nu_thz: f64) -> f64 {
        match self.shape {
            FilterShape::Rectangular => {
                let (lo, hi) = self.band_thz();
                if (lo..=hi).contains(&nu_thz) {
                    1.0
                } else {
                    0.0
                }
            }
            FilterShape::Gaussian => {
                let x = (nu_thz - self.center_thz()) / self.fwhm_thz();
                (-4.0 * LN_2 * x * x).exp()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PumpShape {
    Delta,
    Gaussian,
}

impl fmt::Display for PumpShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PumpShape::Delta => "delta",
            PumpShape::Gaussian => "gaussian",
        })
    }
}

impl FromStr for PumpShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "delta" => Ok(PumpShape::Delta),
            "gaussian" => Ok(PumpShape::Gaussian),
            other => Err(format!("unknown pump shape {other:?}")),
        }
    }
}

/// Second-harmonic pump of a laser at `fundamental_nm`, centred on `2ν₀`.
/// `linewidth_hz` is the intensity FWHM of the sum frequency; a delta pump
/// ignores it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PumpSpectrum {
    pub fundamental_nm: f64,
    pub linewidth_hz: f64,
    pub shape: PumpShape,
}

impl PumpSpectrum {
    pub fn new(fundamental_nm: f64, linewidth_hz: f64, shape: PumpShape) -> Result<Self> {
        if !(fundamental_nm > 0.0) || !(linewidth_hz >= 0.0) {
            return Err(Error::InvalidSpectral(format!(
                "pump wavelength {fundamental_nm} nm / linewidth {linewidth_hz} Hz out of range"
            )));
        }
        if shape == PumpShape::Gaussian && linewidth_hz == 0.0 {
            return Err(Error::InvalidSpectral(
                "gaussian pump needs a positive linewidth".into(),
            ));
        }
        Ok(PumpSpectrum {
            fundamental_nm,
            linewidth_hz,
            shape,
        })
    }

    /// `ν₀`, half the pump frequency.
    pub fn degenerate_thz(&self) -> f64 {
        units::nm_to_thz(self.fundamental_nm)
    }

    pub fn center_thz(&self) -> f64 {
        2.0 * self.degenerate_thz()
    }

    pub fn linewidth_thz(&self) -> f64 {
        units::hz_to_thz(self.linewidth_hz)
    }
}

/// One pump-offset slice of the joint spectrum.
#[derive(Clone, Debug)]
pub struct PumpSlice {
    /// `ε = ν_s + ν_i − 2ν₀`.
    pub sum_offset_thz: f64,
    /// Quadrature weight of the slice in `ε` (1 for a delta pump).
    pub weight: f64,
    /// Joint intensity `|A(δ)|²` of pairs passing both filters.
    pub pair: Density,
    /// Signal-only spectrum seen by a single filtered detector with the idler
    /// blocked: phase matching times one filter.
    pub signal: Density,
}

/// Discretized biphoton joint spectral amplitude.
#[derive(Clone, Debug)]
pub struct BiphotonSpectralAmplitude {
    grid: SpectralGrid,
    degenerate_thz: f64,
    pump_shape: PumpShape,
    slices: Vec<PumpSlice>,
    /// Pair weight per sum offset `ε`, for the two-photon envelope.
    sum_frequency: Density,
}

/// Phase-matching intensity FWHM in nm: `0` is a single-frequency spike,
/// infinity a flat envelope, anything else a gaussian on the signal wavelength
/// around `λ₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum PhaseMatch {
    Spike,
    Flat,
    Gaussian { fwhm_thz: f64 },
}

impl PhaseMatch {
    fn intensity(self, delta: f64) -> f64 {
        match self {
            PhaseMatch::Spike => f64::from(delta == 0.0),
            PhaseMatch::Flat => 1.0,
            PhaseMatch::Gaussian { fwhm_thz } => {
                let x = delta / fwhm_thz;
                (-4.0 * LN_2 * x * x).exp()
            }
        }
    }
}

/// Builds the joint spectrum: phase-matching envelope × both filters, with a
/// gaussian pump additionally weighted by the pump line at `ν_s + ν_i`.
pub fn build_biphoton(
    pump: &PumpSpectrum,
    phasematch_bandwidth_nm: f64,
    filter: &FilterSpectrum,
    grid: &SpectralGrid,
) -> Result<BiphotonSpectralAmplitude> {
    let nu0 = pump.degenerate_thz();
    if (grid.center_thz - nu0).abs() > 1e-9 * nu0 {
        return Err(Error::InvalidSpectral(format!(
            "grid centre {} THz differs from degenerate frequency {nu0} THz",
            grid.center_thz
        )));
    }
    let (lo, hi) = filter.band_thz();
    let bw = hi - lo;
    let across = (bw / grid.spacing()).floor() as usize;
    if across < MIN_POINTS_ACROSS_FILTER {
        return Err(Error::GridTooCoarse {
            points: across,
            required: MIN_POINTS_ACROSS_FILTER,
        });
    }
    if grid.span_thz < 3.0 * bw || lo < nu0 - grid.half_span() || hi > nu0 + grid.half_span() {
        return Err(Error::InvalidSpectral(format!(
            "grid span {} THz around {nu0} THz does not cover the filter band [{lo}, {hi}] THz",
            grid.span_thz
        )));
    }
    let pm = if phasematch_bandwidth_nm == 0.0 {
        PhaseMatch::Spike
    } else if phasematch_bandwidth_nm == f64::INFINITY {
        PhaseMatch::Flat
    } else if phasematch_bandwidth_nm > 0.0 {
        PhaseMatch::Gaussian {
            fwhm_thz: units::bandwidth_nm_to_thz(pump.fundamental_nm, phasematch_bandwidth_nm),
        }
    } else {
        return Err(Error::InvalidSpectral(format!(
            "phase-matching bandwidth must be ≥ 0, got {phasematch_bandwidth_nm}"
        )));
    };

    let offsets: Vec<(f64, f64, f64)> = match pump.shape {
        PumpShape::Delta => vec![(0.0, 1.0, 1.0)],
        PumpShape::Gaussian => {
            let w = pump.linewidth_thz();
            let half = PUMP_SPAN_FWHM * w;
            let h = 2.0 * half / (PUMP_NODES - 1) as f64;
            (0..PUMP_NODES)
                .map(|m| {
                    let eps = -half + m as f64 * h;
                    let x = eps / w;
                    let trap = if m == 0 || m == PUMP_NODES - 1 { h / 2.0 } else { h };
                    (eps, trap, (-4.0 * LN_2 * x * x).exp())
                })
                .collect()
        }
    };

    let detunings = grid.detunings();
    let mut slices = Vec::with_capacity(offsets.len());
    for &(eps, trap, pump_intensity) in &offsets {
        let mid = nu0 + eps / 2.0;
        let (pair, signal) = match (pm, filter.shape) {
            (PhaseMatch::Spike, _) => (
                Density::point(0.0, filter.transmission(mid).powi(2)),
                Density::point(0.0, filter.transmission(mid)),
            ),
            // unit transmission inside the band; only the envelope is sampled
            (_, FilterShape::Rectangular) => {
                let pair_lo = (lo - mid).max(mid - hi);
                let pair_hi = (hi - mid).min(mid - lo);
                (
                    sample_between(&detunings, pair_lo, pair_hi, |d| pm.intensity(d)),
                    sample_between(&detunings, lo - mid, hi - mid, |d| pm.intensity(d)),
                )
            }
            (_, FilterShape::Gaussian) => {
                let (a, b) = (detunings[0], detunings[detunings.len() - 1]);
                (
                    sample_between(&detunings, a, b, |d| {
                        pm.intensity(d) * filter.transmission(mid + d) * filter.transmission(mid - d)
                    }),
                    sample_between(&detunings, a, b, |d| pm.intensity(d) * filter.transmission(mid + d)),
                )
            }
        };
        slices.push(PumpSlice {
            sum_offset_thz: eps,
            weight: trap * pump_intensity,
            pair,
            signal,
        });
    }

    let pair_total: f64 = slices.iter().map(|s| s.weight * s.pair.total()).sum();
    let signal_total: f64 = slices.iter().map(|s| s.weight * s.signal.total()).sum();
    if !(pair_total > 0.0) || !(signal_total > 0.0) {
        return Err(Error::InvalidSpectral(
            "no pair is transmitted by the filters at the degenerate frequency".into(),
        ));
    }
    for s in &mut slices {
        s.pair = s.pair.scaled(1.0 / pair_total);
        s.signal = s.signal.scaled(1.0 / signal_total);
    }

    let sum_frequency = match pump.shape {
        PumpShape::Delta => Density::point(0.0, 1.0),
        PumpShape::Gaussian => Density::linear(
            slices.iter().map(|s| s.sum_offset_thz).collect(),
            slices
                .iter()
                .zip(&offsets)
                .map(|(s, &(_, _, pi))| pi * s.pair.total())
                .collect(),
        ),
    };
    // trapezoid weights and the linear interpolant share the same total
    let sum_frequency = {
        let t = sum_frequency.total();
        sum_frequency.scaled(1.0 / t)
    };

    Ok(BiphotonSpectralAmplitude {
        grid: *grid,
        degenerate_thz: nu0,
        pump_shape: pump.shape,
        slices,
        sum_frequency,
    })
}

/// Linear density on `[lo, hi]`: the exact end points plus every grid node
/// strictly inside. An empty interval yields a zero-weight point.
fn sample_between(grid: &[f64], lo: f64, hi: f64, value: impl Fn(f64) -> f64) -> Density {
    if !(hi > lo) {
        return Density::point(0.0, 0.0);
    }
    let eps = 1e-9 * (grid[1] - grid[0]);
    let mut nodes = vec![lo];
    nodes.extend(grid.iter().copied().filter(|&d| d > lo + eps && d < hi - eps));
    nodes.push(hi);
    let values = nodes.iter().map(|&d| value(d)).collect();
    Density::linear(nodes, values)
}

impl BiphotonSpectralAmplitude {
    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn degenerate_thz(&self) -> f64 {
        self.degenerate_thz
    }

    pub fn pump_shape(&self) -> PumpShape {
        self.pump_shape
    }

    pub fn slices(&self) -> &[PumpSlice] {
        &self.slices
    }

    /// `Σ_ε w ∫|A|² dδ`, 1 after construction.
    pub fn norm(&self) -> f64 {
        self.slices.iter().map(|s| s.weight * s.pair.total()).sum()
    }

    /// `(ν_s, ν_i, A)` at every stored node; amplitudes are real and
    /// non-negative.
    pub fn pair_amplitudes(&self) -> Vec<(f64, f64, Complex64)> {
        let mut out = Vec::new();
        for s in &self.slices {
            let mid = self.degenerate_thz + s.sum_offset_thz / 2.0;
            for (d, v) in s.pair.nodes().into_iter().zip(s.pair.values()) {
                out.push((mid + d, mid - d, Complex64::new(v.max(0.0).sqrt(), 0.0)));
            }
        }
        out
    }

    /// Pair-weighted RMS of `ν_s + ν_i − 2ν₀`, in THz.
    pub fn sum_frequency_rms_thz(&self) -> f64 {
        (self.sum_frequency.moment(2) / self.sum_frequency.total()).sqrt()
    }

    /// `∫|A|² e^{−4πiδτ}`: the exchange overlap behind the HOM dip.
    fn hom_overlap(&self, tau_ps: f64) -> Complex64 {
        let k = -4.0 * PI * tau_ps;
        self.slices.iter().map(|s| s.pair.characteristic(k) * s.weight).sum()
    }

    /// Normalized first-order coherence of the signal-only spectrum.
    fn signal_coherence(&self, tau_ps: f64) -> Complex64 {
        let k = 2.0 * PI * tau_ps;
        self.slices
            .iter()
            .map(|s| {
                let carrier = (self.degenerate_thz + s.sum_offset_thz / 2.0) * k;
                s.signal.characteristic(k) * Complex64::from_polar(s.weight, carrier)
            })
            .sum()
    }

    /// Normalized coherence of the pair sum frequency.
    fn pair_coherence(&self, tau_ps: f64) -> Complex64 {
        let k = 2.0 * PI * tau_ps;
        self.sum_frequency.characteristic(k) * Complex64::from_polar(1.0, 2.0 * self.degenerate_thz * k)
    }

    /// One-photon fringe envelope `|g¹(ΔL)|` at a path difference in nm.
    pub fn one_photon_envelope(&self, path_nm: f64) -> f64 {
        self.signal_coherence(units::delay_ps(path_nm)).norm()
    }

    /// Two-photon fringe envelope at a path difference in nm.
    pub fn two_photon_envelope(&self, path_nm: f64) -> f64 {
        self.pair_coherence(units::delay_ps(path_nm)).norm()
    }

    /// Path difference (nm) where the one-photon envelope first falls to 1/e.
    pub fn one_photon_coherence_half_width_nm(&self) -> Option<f64> {
        let target = (-1.0f64).exp();
        let step = 1_000.0;
        let mut lo = 0.0;
        let mut hi = step;
        while self.one_photon_envelope(hi) > target {
            lo = hi;
            hi += step;
            if hi > 1e9 {
                return None;
            }
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.one_photon_envelope(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// One sample of a scan. `counts` and `stderr` are filled in Monte Carlo mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub position: f64,
    pub rate: f64,
    pub counts: Option<u64>,
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub axis_label: String,
    pub unit: LengthUnit,
    pub samples: Vec<ScanSample>,
}

impl ScanResult {
    pub fn new(axis_label: impl Into<String>, unit: LengthUnit, samples: Vec<ScanSample>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].position > w[0].position)) {
            return Err(Error::InvalidScan("positions must be strictly increasing".into()));
        }
        if let Some(s) = samples.iter().find(|s| !(s.rate >= 0.0)) {
            return Err(Error::InvalidScan(format!(
                "negative or undefined rate {} at {}",
                s.rate, s.position
            )));
        }
        Ok(ScanResult {
            axis_label: axis_label.into(),
            unit,
            samples,
        })
    }

    pub fn from_rates(
        axis_label: impl Into<String>,
        unit: LengthUnit,
        positions: &[f64],
        rates: &[f64],
    ) -> Result<Self> {
        let samples = positions
            .iter()
            .zip(rates)
            .map(|(&position, &rate)| ScanSample {
                position,
                rate,
                counts: None,
                stderr: None,
            })
            .collect();
        Self::new(axis_label, unit, samples)
    }

    pub fn positions(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.position).collect()
    }

    pub fn positions_nm(&self) -> Vec<f64> {
        self.samples.iter().map(|s| self.unit.to_nm(s.position)).collect()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.rate).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// `start, start + step, …` up to and including `stop` (within rounding).
pub fn scan_positions(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidScan(format!(
            "scan {start}..{stop} with step {step} is empty or ill-formed"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn evaluate(positions: &[f64], unit: LengthUnit, f: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
    positions
        .par_iter()
        .map(|&x| f(units::delay_ps(unit.to_nm(x))).max(0.0))
        .collect()
}

/// Coincidence rate behind the first splitter against its path difference
/// `ΔL₁`: `½(1 − p·Re∫|A|² e^{−4πiδτ})`, baseline ½.
pub fn hom_scan(
    bsa: &BiphotonSpectralAmplitude,
    positions: &[f64],
    unit: LengthUnit,
    p: Distinguishability,
) -> Result<ScanResult> {
    let rates = evaluate(positions, unit, |tau| p.mix(0.5 * (1.0 - bsa.hom_overlap(tau).re), 0.5));
    ScanResult::from_rates("delta_L1", unit, positions, &rates)
}

/// Single-photon rate at port 5 with one input blocked against `ΔL₂`.
pub fn mz_one_photon_scan(
    bsa: &BiphotonSpectralAmplitude,
    positions: &[f64],
    unit: LengthUnit,
    p: Distinguishability,
) -> Result<ScanResult> {
    let rates = evaluate(positions, unit, |tau| {
        p.mix(0.5 * (1.0 - bsa.signal_coherence(tau).re), 0.5)
    });
    ScanResult::from_rates("delta_L2", unit, positions, &rates)
}

/// Same-port pair rate at port 5 for the NOON state prepared at `ΔL₁ = 0`,
/// against `ΔL₂`.
pub fn mz_two_photon_scan(
    bsa: &BiphotonSpectralAmplitude,
    positions: &[f64],
    unit: LengthUnit,
    p: Distinguishability,
) -> Result<ScanResult> {
    let rates = evaluate(positions, unit, |tau| {
        p.mix(0.5 * (1.0 - bsa.pair_coherence(tau).re), 0.5)
    });
    ScanResult::from_rates("delta_L2", unit, positions, &rates)
}

/// A coherence length, or `Unbounded` for a zero bandwidth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceLength {
    Bounded(f64),
    Unbounded,
}

impl CoherenceLength {
    pub fn value(self) -> Option<f64> {
        match self {
            CoherenceLength::Bounded(v) => Some(v),
            CoherenceLength::Unbounded => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceLengths {
    /// `λ_c²/Δλ` in μm.
    pub one_photon_um: CoherenceLength,
    /// `c/Δν₀` in cm.
    pub two_photon_cm: CoherenceLength,
}

/// Order-of-magnitude coherence lengths: `λ_c²/Δλ` for single photons behind
/// the filter and `c/Δν₀` for the pair sum frequency.
pub fn coherence_lengths(filter: &FilterSpectrum, pump: &PumpSpectrum) -> CoherenceLengths {
    let one = if filter.bandwidth_nm > 0.0 {
        CoherenceLength::Bounded(filter.center_nm * filter.center_nm / filter.bandwidth_nm * 1e-3)
    } else {
        CoherenceLength::Unbounded
    };
    let two = if pump.shape == PumpShape::Delta || pump.linewidth_hz <= 0.0 {
        CoherenceLength::Unbounded
    } else {
        CoherenceLength::Bounded(units::SPEED_OF_LIGHT_M_S / pump.linewidth_hz * 100.0)
    };
    CoherenceLengths {
        one_photon_um: one,
        two_photon_cm: two,
    }
}
