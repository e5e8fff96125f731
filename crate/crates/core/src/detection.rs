//! Counting-rate observables and their single-frequency closed forms.
//!
//! Rates are quantum expectation values per trial:
//!
//! * one-photon `R₅ = ⟨a†a⟩`,
//! * same-port pair `R₅₅ = ⟨a†a†aa⟩`,
//! * cross-port coincidence `R₄₅ = ⟨a₄†a₅†a₅a₄⟩`.
//!
//! Each is evaluated as the squared norm of the annihilated state, so the
//! result is real by construction; the inner-product route is kept to catch
//! a non-Hermitian slip in debug builds.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use crate::fit::{fit_fringe, FringeSummary};
use crate::fock::{apply_annihilation, inner_product, ModeLabel, StateVector};
use crate::optics::{lift_and_evolve, mz_transfer};
use crate::{Error, Result};

/// Allowed deviation of `⟨ψ|ψ⟩` from one for rate inputs.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Port 4 of the Mach-Zehnder output (mode 0).
pub const PORT4: ModeLabel = ModeLabel(0);
/// Port 5 of the Mach-Zehnder output (mode 1).
pub const PORT5: ModeLabel = ModeLabel(1);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTriple {
    pub r5: f64,
    pub r55: f64,
    pub r45: f64,
}

fn check_normalized(state: &StateVector) -> Result<()> {
    let n = state.norm_sqr();
    if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
        Err(Error::NotNormalized { norm_sqr: n })
    } else {
        Ok(())
    }
}

fn expectation_of_annihilated(reduced: &StateVector) -> f64 {
    let v = inner_product(reduced, reduced).expect("same space");
    debug_assert!(v.im.abs() < 1e-12, "non-real expectation {v}");
    v.re
}

/// `⟨a†a⟩` at `mode`.
pub fn rate_one_photon(state: &StateVector, mode: ModeLabel) -> Result<f64> {
    check_normalized(state)?;
    let a = apply_annihilation(state, mode)?;
    Ok(expectation_of_annihilated(&a))
}

/// `⟨a†a†aa⟩ = ⟨n(n−1)⟩` at `mode`.
pub fn rate_two_photon_same_port(state: &StateVector, mode: ModeLabel) -> Result<f64> {
    check_normalized(state)?;
    let aa = apply_annihilation(&apply_annihilation(state, mode)?, mode)?;
    Ok(expectation_of_annihilated(&aa))
}

/// `⟨a_a† a_b† a_b a_a⟩ = ⟨n_a n_b⟩` for distinct modes.
pub fn rate_coincidence(state: &StateVector, mode_a: ModeLabel, mode_b: ModeLabel) -> Result<f64> {
    if mode_a == mode_b {
        return Err(Error::IdenticalModes(mode_a.0));
    }
    check_normalized(state)?;
    let ab = apply_annihilation(&apply_annihilation(state, mode_a)?, mode_b)?;
    Ok(expectation_of_annihilated(&ab))
}

/// `R₅`, `R₅₅` at port 5 and `R₄₅` across ports 4 and 5.
pub fn rate_triple(state: &StateVector, port4: ModeLabel, port5: ModeLabel) -> Result<RateTriple> {
    Ok(RateTriple {
        r5: rate_one_photon(state, port5)?,
        r55: rate_two_photon_same_port(state, port5)?,
        r45: rate_coincidence(state, port4, port5)?,
    })
}

/// Evolve a two-mode input through the Mach-Zehnder at phase difference
/// `phi` (`φ₂ = phi`, `φ₃ = 0`) and read out all three rates.
pub fn mz_rates(input: &StateVector, phi: f64) -> Result<RateTriple> {
    let out = lift_and_evolve(input, &mz_transfer(phi, 0.0))?;
    rate_triple(&out, PORT4, PORT5)
}

/// Closed-form single-frequency fringes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticFormula {
    /// `R₅₅(|1,1⟩) = ½(1 − cos 2φ)`
    R55Fock,
    /// `R₄₅(|1,1⟩) = ½(1 + cos 2φ)`
    R45Fock,
    /// `R₅(|0,1⟩) = ½(1 − cos φ)`
    R5Single,
    /// `R₅₅(|0,α⟩) = |α|⁴/4 (1 − cos φ)²`
    R55Coherent,
    /// `R₄₅(|0,α⟩) = |α|⁴/8 (1 − cos 2φ)`
    R45Coherent,
}

impl AnalyticFormula {
    pub const ALL: [AnalyticFormula; 5] = [
        AnalyticFormula::R55Fock,
        AnalyticFormula::R45Fock,
        AnalyticFormula::R5Single,
        AnalyticFormula::R55Coherent,
        AnalyticFormula::R45Coherent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalyticFormula::R55Fock => "r55_fock",
            AnalyticFormula::R45Fock => "r45_fock",
            AnalyticFormula::R5Single => "r5_single",
            AnalyticFormula::R55Coherent => "r55_coherent",
            AnalyticFormula::R45Coherent => "r45_coherent",
        }
    }

    pub fn is_coherent(self) -> bool {
        matches!(self, AnalyticFormula::R55Coherent | AnalyticFormula::R45Coherent)
    }
}

impl fmt::Display for AnalyticFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnalyticFormula {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown formula {s:?}"))
    }
}

/// Evaluates the chosen closed form. `alpha` must be given exactly for the
/// coherent formulas.
pub fn analytic_rate(formula: AnalyticFormula, phi: f64, alpha: Option<Complex64>) -> Result<f64> {
    match (formula.is_coherent(), alpha) {
        (true, None) => {
            return Err(Error::FormulaArgument {
                formula: formula.name(),
                reason: "needs a coherent amplitude",
            })
        }
        (false, Some(_)) => {
            return Err(Error::FormulaArgument {
                formula: formula.name(),
                reason: "takes no coherent amplitude",
            })
        }
        _ => {}
    }
    let a4 = alpha.map(|a| a.norm_sqr().powi(2)).unwrap_or(0.0);
    Ok(match formula {
        AnalyticFormula::R55Fock => 0.5 * (1.0 - (2.0 * phi).cos()),
        AnalyticFormula::R45Fock => 0.5 * (1.0 + (2.0 * phi).cos()),
        AnalyticFormula::R5Single => 0.5 * (1.0 - phi.cos()),
        AnalyticFormula::R55Coherent => a4 / 4.0 * (1.0 - phi.cos()).powi(2),
        AnalyticFormula::R45Coherent => a4 / 8.0 * (1.0 - (2.0 * phi).cos()),
    })
}
