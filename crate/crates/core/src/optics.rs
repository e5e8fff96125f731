//! Mode unitaries and their action on Fock states.
//!
//! Convention: a [`ModeUnitary`] `U` maps input annihilation operators to
//! output ones, `a_out[j] = Σ_k U[j][k] a_in[k]`. With the symmetric 50/50
//! splitter `(1/√2)(1 i; i 1)` reflection picks up a factor `i`. States
//! evolve by substituting `a_in[k]† → Σ_j U[j][k] a_out[j]†` into each basis
//! monomial and re-expanding, which is exact for any photon number.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::fock::{FockBasisState, ModeLabel, StateVector, DEFAULT_BASIS_CAP};
use crate::{Error, Result};

/// Tolerance used when a unitary is checked at construction.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square unitary acting on an ordered subset of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    dim: usize,
    /// Row-major, `matrix[j * dim + k]` couples input `k` into output `j`.
    matrix: Vec<Complex64>,
    acting_modes: Vec<ModeLabel>,
}

impl ModeUnitary {
    /// Builds from rows acting on modes `0..rows.len()`, checking unitarity.
    pub fn new(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        Self::on_modes(rows, (0..dim).map(ModeLabel).collect())
    }

    pub fn on_modes(rows: Vec<Vec<Complex64>>, acting_modes: Vec<ModeLabel>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: rows.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(dim),
            });
        }
        if acting_modes.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: acting_modes.len(),
            });
        }
        let mut seen = acting_modes.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != dim {
            return Err(Error::InvalidMode {
                mode: acting_modes.iter().map(|m| m.0).max().unwrap_or(0),
                modes: dim,
            });
        }
        let u = ModeUnitary {
            dim,
            matrix: rows.into_iter().flatten().collect(),
            acting_modes,
        };
        let deviation = u.unitarity_deviation();
        if deviation > UNITARITY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(u)
    }

    fn from_flat(dim: usize, matrix: Vec<Complex64>) -> Self {
        ModeUnitary {
            dim,
            matrix,
            acting_modes: (0..dim).map(ModeLabel).collect(),
        }
    }

    /// Same matrix, relabeled onto other modes of a larger space.
    pub fn relabeled(&self, acting_modes: Vec<ModeLabel>) -> Result<Self> {
        Self::on_modes(self.rows(), acting_modes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn acting_modes(&self) -> &[ModeLabel] {
        &self.acting_modes
    }

    /// Coupling from input `k` into output `j`.
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.matrix[j * self.dim + k]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.matrix.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut m = vec![ZERO; n * n];
        for j in 0..n {
            for k in 0..n {
                m[k * n + j] = self.entry(j, k).conj();
            }
        }
        ModeUnitary {
            dim: n,
            matrix: m,
            acting_modes: self.acting_modes.clone(),
        }
    }

    /// `later · self`: apply `self` first. Both must act on the same modes.
    pub fn then(&self, later: &ModeUnitary) -> Result<Self> {
        if self.acting_modes != later.acting_modes {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: later.dim,
            });
        }
        let n = self.dim;
        let mut m = vec![ZERO; n * n];
        for j in 0..n {
            for k in 0..n {
                m[j * n + k] = (0..n).map(|l| later.entry(j, l) * self.entry(l, k)).sum();
            }
        }
        Ok(ModeUnitary {
            dim: n,
            matrix: m,
            acting_modes: self.acting_modes.clone(),
        })
    }

    /// Largest entry of `|U·U† − 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                let s: Complex64 = (0..n).map(|l| self.entry(j, l) * self.entry(k, l).conj()).sum();
                let target = if j == k { ONE } else { ZERO };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

/// Path-length difference and the wavelength it is measured against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathPhase {
    pub delta_l_nm: f64,
    pub wavelength_nm: f64,
}

impl PathPhase {
    /// `2π ΔL / λ` in radians.
    pub fn phase(&self) -> f64 {
        2.0 * PI * self.delta_l_nm / self.wavelength_nm
    }
}

/// Symmetric lossless 50/50 splitter, `(1/√2)(1 i; i 1)`.
pub fn beamsplitter_5050() -> ModeUnitary {
    let t = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let r = I * FRAC_1_SQRT_2;
    ModeUnitary::from_flat(2, vec![t, r, r, t])
}

/// `diag(e^{iφ}, 1)`. Only the phase difference between the arms is observable.
pub fn phase_retarder(phi: f64) -> ModeUnitary {
    ModeUnitary::from_flat(2, vec![Complex64::from_polar(1.0, phi), ZERO, ZERO, ONE])
}

/// Retarder with independent phases on both arms, `diag(e^{iφ₂}, e^{iφ₃})`.
pub fn arm_phases(phi2: f64, phi3: f64) -> ModeUnitary {
    ModeUnitary::from_flat(
        2,
        vec![
            Complex64::from_polar(1.0, phi2),
            ZERO,
            ZERO,
            Complex64::from_polar(1.0, phi3),
        ],
    )
}

/// Mach-Zehnder transfer `(1/2)(1 i; i 1)·diag(e^{iφ₂}, e^{iφ₃})·(1 i; i 1)`.
///
/// Output mode 0 is port 4, output mode 1 is port 5.
pub fn mz_transfer(phi2: f64, phi3: f64) -> ModeUnitary {
    let bs = beamsplitter_5050();
    bs.then(&arm_phases(phi2, phi3))
        .and_then(|u| u.then(&bs))
        .expect("2x2 factors share modes")
}

/// Evolve `state` under `u`, leaving modes outside `u.acting_modes()` untouched.
pub fn lift_and_evolve(state: &StateVector, u: &ModeUnitary) -> Result<StateVector> {
    lift_and_evolve_capped(state, u, DEFAULT_BASIS_CAP)
}

pub fn lift_and_evolve_capped(state: &StateVector, u: &ModeUnitary, cap: usize) -> Result<StateVector> {
    let modes = state.modes();
    let acting: Vec<usize> = u.acting_modes.iter().map(|m| m.check(modes)).collect::<Result<_>>()?;

    let mut out: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
    for (basis, amp) in state.terms() {
        // Monomial coefficients: exponents of a† per mode, without the
        // 1/√(n!) normalization of the basis states.
        let mut norm = 1.0;
        let mut seed = basis.clone();
        let mut to_apply = Vec::new();
        for (k, &m) in acting.iter().enumerate() {
            let n = basis.occupation(m);
            norm /= factorial_sqrt(n);
            seed.occupations_mut()[m] = 0;
            to_apply.extend(std::iter::repeat_n(k, n as usize));
        }
        let mut poly: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
        poly.insert(seed, amp * norm);
        for &k in &to_apply {
            let mut next: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
            for (mono, c) in &poly {
                for (j, &mj) in acting.iter().enumerate() {
                    let coupling = u.entry(j, k);
                    if coupling == ZERO {
                        continue;
                    }
                    let mut m = mono.clone();
                    m.occupations_mut()[mj] += 1;
                    *next.entry(m).or_insert(ZERO) += c * coupling;
                }
            }
            if next.len() > cap {
                return Err(Error::BasisTooLarge { size: next.len(), cap });
            }
            poly = next;
        }
        for (mono, c) in poly {
            let f: f64 = acting.iter().map(|&m| factorial_sqrt(mono.occupation(m))).product();
            *out.entry(mono).or_insert(ZERO) += c * f;
        }
        if out.len() > cap {
            return Err(Error::BasisTooLarge { size: out.len(), cap });
        }
    }
    Ok(StateVector::from_map(modes, out, state.prune_threshold()))
}

fn factorial_sqrt(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).sqrt()).product()
}

/// Probability `p` that the two photons interfere; with `1 − p` they are
/// distinguishable and contribute only their interference-free rate.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Distinguishability(f64);

impl Distinguishability {
    pub const IDEAL: Distinguishability = Distinguishability(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Distinguishability(p))
        } else {
            Err(Error::InvalidSpectral(format!(
                "distinguishability must lie in [0, 1], got {p}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `p·interfering + (1 − p)·incoherent`.
    pub fn mix(self, interfering: f64, incoherent: f64) -> f64 {
        self.0 * interfering + (1.0 - self.0) * incoherent
    }
}
