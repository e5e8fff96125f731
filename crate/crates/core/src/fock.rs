//! Sparse multimode bosonic Fock space.
//!
//! A [`StateVector`] maps occupation vectors to complex amplitudes. Terms are
//! kept in a `BTreeMap`, so iteration follows the canonical lexicographic
//! order of [`FockBasisState`] and debug dumps are byte-for-byte reproducible.
//! Amplitudes with modulus below the prune threshold (default
//! [`DEFAULT_PRUNE_THRESHOLD`]) are dropped after every operation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Amplitudes with modulus below this are dropped after each operation.
pub const DEFAULT_PRUNE_THRESHOLD: f64 = 1e-15;

/// Largest basis (or intermediate expansion) an operation may produce.
pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

/// Allowed truncated tail weight for a coherent input.
pub const COHERENT_TAIL_THRESHOLD: f64 = 1e-10;

/// A spatial path, dense in `0..modes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel(pub usize);

impl ModeLabel {
    pub fn index(self) -> usize {
        self.0
    }

    pub(crate) fn check(self, modes: usize) -> Result<usize> {
        if self.0 < modes {
            Ok(self.0)
        } else {
            Err(Error::InvalidMode { mode: self.0, modes })
        }
    }
}

impl From<usize> for ModeLabel {
    fn from(i: usize) -> Self {
        ModeLabel(i)
    }
}

/// Occupation-number vector, one entry per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockBasisState(Vec<u32>);

impl FockBasisState {
    pub fn new(occupations: impl Into<Vec<u32>>) -> Self {
        FockBasisState(occupations.into())
    }

    pub fn vacuum(modes: usize) -> Self {
        FockBasisState(vec![0; modes])
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn occupation(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    pub(crate) fn occupations_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// Number of occupation vectors of `modes` entries summing to `total`,
/// `C(total + modes - 1, modes - 1)`, or `None` on overflow.
pub fn basis_size(modes: usize, total: u32) -> Option<usize> {
    if modes == 0 {
        return Some(usize::from(total == 0));
    }
    let n = total as u128 + modes as u128 - 1;
    let k = (modes as u128 - 1).min(total as u128);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    usize::try_from(acc).ok()
}

/// All occupation vectors with `total_photons` photons over `modes` modes, in
/// ascending lexicographic order.
pub fn enumerate_basis(modes: usize, total_photons: u32) -> Result<Vec<FockBasisState>> {
    enumerate_basis_capped(modes, total_photons, DEFAULT_BASIS_CAP)
}

pub fn enumerate_basis_capped(modes: usize, total_photons: u32, cap: usize) -> Result<Vec<FockBasisState>> {
    if modes == 0 {
        return Err(Error::InvalidMode { mode: 0, modes: 0 });
    }
    let size = basis_size(modes, total_photons).unwrap_or(usize::MAX);
    if size > cap {
        return Err(Error::BasisTooLarge { size, cap });
    }
    let mut out = Vec::with_capacity(size);
    let mut current = vec![0u32; modes];
    fill(&mut current, 0, total_photons, &mut out);
    Ok(out)
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<FockBasisState>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(FockBasisState(current.to_vec()));
        return;
    }
    for n in 0..=remaining {
        current[pos] = n;
        fill(current, pos + 1, remaining - n, out);
    }
}

/// Sparse superposition of Fock basis states over a fixed number of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    modes: usize,
    terms: BTreeMap<FockBasisState, Complex64>,
    prune_threshold: f64,
}

impl StateVector {
    pub fn zero(modes: usize) -> Self {
        StateVector {
            modes,
            terms: BTreeMap::new(),
            prune_threshold: DEFAULT_PRUNE_THRESHOLD,
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::basis(FockBasisState::vacuum(modes))
    }

    pub fn basis(state: FockBasisState) -> Self {
        let mut out = Self::zero(state.modes());
        out.terms.insert(state, Complex64::new(1.0, 0.0));
        out
    }

    /// Build from explicit terms. Repeated basis states are summed.
    pub fn from_terms<I>(modes: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockBasisState, Complex64)>,
    {
        let mut out = Self::zero(modes);
        for (b, c) in terms {
            if b.modes() != modes {
                return Err(Error::DimensionMismatch {
                    left: modes,
                    right: b.modes(),
                });
            }
            *out.terms.entry(b).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        out.prune();
        Ok(out)
    }

    /// Replace the prune threshold and re-prune.
    pub fn with_prune_threshold(mut self, threshold: f64) -> Self {
        self.prune_threshold = threshold;
        self.prune();
        self
    }

    pub fn prune_threshold(&self) -> f64 {
        self.prune_threshold
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, state: &FockBasisState) -> Complex64 {
        self.terms.get(state).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Amplitude of the basis state with the given occupations.
    pub fn amplitude_of(&self, occupations: &[u32]) -> Complex64 {
        self.amplitude(&FockBasisState::new(occupations.to_vec()))
    }

    pub fn probability_of(&self, occupations: &[u32]) -> f64 {
        self.amplitude_of(occupations).norm_sqr()
    }

    /// Terms in lexicographic basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&FockBasisState, &Complex64)> {
        self.terms.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    /// Distinct total photon numbers present.
    pub fn photon_numbers(&self) -> BTreeSet<u32> {
        self.terms.keys().map(FockBasisState::total).collect()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = Self {
            modes: self.modes,
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * factor)).collect(),
            prune_threshold: self.prune_threshold,
        };
        out.prune();
        out
    }

    /// Rescaled to unit norm. The zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    pub fn add(&self, other: &StateVector) -> Result<Self> {
        check_modes(self.modes, other.modes)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            *out.terms.entry(b.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        out.prune();
        Ok(out)
    }

    pub(crate) fn from_map(modes: usize, terms: BTreeMap<FockBasisState, Complex64>, prune_threshold: f64) -> Self {
        let mut out = StateVector {
            modes,
            terms,
            prune_threshold,
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        let t = self.prune_threshold;
        self.terms.retain(|_, c| c.norm() >= t);
    }

    /// One line per term, `occupations<TAB>re<TAB>im`, lexicographic order,
    /// 17 significant digits.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (b, c) in &self.terms {
            s.push_str(&format!("{b}\t{:.16e}\t{:.16e}\n", c.re, c.im));
        }
        s
    }
}

fn check_modes(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// `a†` on `mode`: `|…,n,…⟩ → √(n+1)|…,n+1,…⟩`.
pub fn apply_creation(state: &StateVector, mode: ModeLabel) -> Result<StateVector> {
    let m = mode.check(state.modes)?;
    let mut terms = BTreeMap::new();
    for (b, c) in &state.terms {
        let mut next = b.clone();
        let n = next.0[m];
        next.0[m] = n + 1;
        terms.insert(next, c * ((n + 1) as f64).sqrt());
    }
    Ok(StateVector::from_map(state.modes, terms, state.prune_threshold))
}

/// `a` on `mode`: `|…,n,…⟩ → √n|…,n−1,…⟩`; vacuum terms in that mode vanish.
pub fn apply_annihilation(state: &StateVector, mode: ModeLabel) -> Result<StateVector> {
    let m = mode.check(state.modes)?;
    let mut terms = BTreeMap::new();
    for (b, c) in &state.terms {
        let n = b.0[m];
        if n == 0 {
            continue;
        }
        let mut next = b.clone();
        next.0[m] = n - 1;
        terms.insert(next, c * (n as f64).sqrt());
    }
    Ok(StateVector::from_map(state.modes, terms, state.prune_threshold))
}

/// `⟨bra|ket⟩`, conjugate-linear in `bra`.
pub fn inner_product(bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
    check_modes(bra.modes, ket.modes)?;
    let (small, large, conj_small) = if bra.len() <= ket.len() {
        (bra, ket, true)
    } else {
        (ket, bra, false)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, c) in &small.terms {
        if let Some(d) = large.terms.get(b) {
            acc += if conj_small { c.conj() * d } else { d.conj() * c };
        }
    }
    Ok(acc)
}

/// Coherent-state amplitude and per-mode truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentParams {
    pub alpha: Complex64,
    pub truncation: u32,
}

impl CoherentParams {
    /// Truncation defaults to `ceil(|α|² + 6|α| + 6)`, raised further when
    /// that still leaves more than [`COHERENT_TAIL_THRESHOLD`] in the tail
    /// (from about `|α| = 1.7` upward).
    pub fn new(alpha: Complex64) -> Self {
        CoherentParams {
            alpha,
            truncation: default_truncation(alpha.norm()),
        }
    }

    pub fn with_truncation(alpha: Complex64, truncation: u32) -> Self {
        CoherentParams { alpha, truncation }
    }

    /// Poisson weight beyond the truncation, `Σ_{n>T} e^{-|α|²}|α|^{2n}/n!`.
    pub fn tail_weight(&self) -> f64 {
        poisson_tail(self.alpha.norm_sqr(), self.truncation)
    }
}

pub fn default_truncation(abs_alpha: f64) -> u32 {
    let mean = abs_alpha * abs_alpha;
    let mut t = (mean + 6.0 * abs_alpha + 6.0).ceil() as u32;
    while poisson_tail(mean, t) >= COHERENT_TAIL_THRESHOLD {
        t += 1;
    }
    t
}

fn poisson_tail(mean: f64, truncation: u32) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    // log of the first omitted term, then sum forward until negligible
    let first = truncation + 1;
    let ln_fact: f64 = (1..=first).map(|k| (k as f64).ln()).sum();
    let mut term = (-mean + first as f64 * mean.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut n = first;
    while term > sum * 1e-17 || (n as f64) < mean {
        sum += term;
        n += 1;
        term *= mean / n as f64;
        if n > first + 100_000 {
            break;
        }
    }
    sum
}

/// A truncated, renormalized coherent input.
#[derive(Clone, Debug)]
pub struct CoherentInput {
    pub state: StateVector,
    /// Factor the truncated amplitudes were multiplied by to restore unit norm.
    pub renormalization: f64,
    pub tail_weight: f64,
}

/// `e^{-|α|²/2} Σₙ αⁿ/√(n!) |n⟩` in `mode`, vacuum elsewhere.
pub fn coherent_input(params: CoherentParams, mode: ModeLabel, modes: usize) -> Result<CoherentInput> {
    let m = mode.check(modes)?;
    let tail = params.tail_weight();
    if tail > COHERENT_TAIL_THRESHOLD {
        return Err(Error::TruncationTooSmall {
            truncation: params.truncation,
            tail,
            threshold: COHERENT_TAIL_THRESHOLD,
        });
    }
    let mut coeff = Complex64::new((-params.alpha.norm_sqr() / 2.0).exp(), 0.0);
    let mut terms = Vec::with_capacity(params.truncation as usize + 1);
    for n in 0..=params.truncation {
        if n > 0 {
            coeff = coeff * params.alpha / (n as f64).sqrt();
        }
        let mut b = FockBasisState::vacuum(modes);
        b.0[m] = n;
        terms.push((b, coeff));
    }
    let kept: f64 = terms.iter().map(|(_, c)| c.norm_sqr()).sum();
    let renormalization = 1.0 / kept.sqrt();
    let state = StateVector::from_terms(modes, terms.into_iter().map(|(b, c)| (b, c * renormalization)))?;
    Ok(CoherentInput {
        state,
        renormalization,
        tail_weight: tail,
    })
}
