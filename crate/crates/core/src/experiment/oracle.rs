//! Full simulation against the closed-form fringes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detection::{analytic_rate, mz_rates, AnalyticFormula, RateTriple};
use crate::fock::{coherent_input, CoherentParams, FockBasisState, ModeLabel, StateVector};
use crate::{Error, Result};

/// Minimum per-mode truncation used for coherent inputs in the comparison.
pub const ORACLE_MIN_TRUNCATION: u32 = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub formula: AnalyticFormula,
    /// Least-squares factor applied to the closed form before comparing.
    pub scale: f64,
    pub max_abs: f64,
    pub rms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationTable {
    pub points: usize,
    pub alpha: f64,
    pub rows: Vec<DeviationRow>,
}

impl DeviationTable {
    pub fn row(&self, formula: AnalyticFormula) -> &DeviationRow {
        self.rows
            .iter()
            .find(|r| r.formula == formula)
            .expect("all formulas present")
    }

    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.max_abs).fold(0.0, f64::max)
    }
}

/// `n` evenly spaced phases over `[0, 4π)`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 4.0 * std::f64::consts::PI * i as f64 / n as f64)
        .collect()
}

/// Pipeline rates for `|1,1⟩`, `|0,1⟩` and `|0,α⟩` at one phase.
pub fn pipeline_rates(phi: f64, coherent: &StateVector) -> Result<(RateTriple, RateTriple, RateTriple)> {
    let pair = StateVector::basis(FockBasisState::new(vec![1, 1]));
    let single = StateVector::basis(FockBasisState::new(vec![0, 1]));
    Ok((mz_rates(&pair, phi)?, mz_rates(&single, phi)?, mz_rates(coherent, phi)?))
}

/// For each closed form, max and RMS deviation of the simulation from the
/// closed form after one least-squares scale.
pub fn compare_oracles(phi_grid: &[f64], alpha: Complex64) -> Result<DeviationTable> {
    if phi_grid.is_empty() {
        return Err(Error::InvalidScan("empty phase grid".into()));
    }
    let params = CoherentParams::new(alpha);
    let params = CoherentParams::with_truncation(alpha, params.truncation.max(ORACLE_MIN_TRUNCATION));
    let coherent = coherent_input(params, ModeLabel(1), 2)?.state;

    let mut sim: Vec<[f64; 5]> = Vec::with_capacity(phi_grid.len());
    for &phi in phi_grid {
        let (pair, single, coh) = pipeline_rates(phi, &coherent)?;
        sim.push([pair.r55, pair.r45, single.r5, coh.r55, coh.r45]);
    }
    let mut rows = Vec::new();
    for (col, formula) in AnalyticFormula::ALL.into_iter().enumerate() {
        let a = if formula.is_coherent() { Some(alpha) } else { None };
        let ana: Vec<f64> = phi_grid
            .iter()
            .map(|&phi| analytic_rate(formula, phi, a))
            .collect::<Result<_>>()?;
        let num: f64 = ana.iter().zip(&sim).map(|(x, s)| x * s[col]).sum();
        let den: f64 = ana.iter().map(|x| x * x).sum();
        let scale = if den > 0.0 { num / den } else { 1.0 };
        let dev: Vec<f64> = ana.iter().zip(&sim).map(|(x, s)| s[col] - scale * x).collect();
        rows.push(DeviationRow {
            formula,
            scale,
            max_abs: dev.iter().fold(0.0f64, |m, d| m.max(d.abs())),
            rms: (dev.iter().map(|d| d * d).sum::<f64>() / dev.len() as f64).sqrt(),
        });
    }
    Ok(DeviationTable {
        points: phi_grid.len(),
        alpha: alpha.norm(),
        rows,
    })
}
