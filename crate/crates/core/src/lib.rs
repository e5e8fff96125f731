//! Two-mode linear-optical interferometry with bosonic Fock states.
//!
//! The crate simulates the biphoton de Broglie wavelength experiment: a
//! `|1,1⟩` pair bunched into a two-photon NOON state by Hong-Ou-Mandel
//! interference, Mach-Zehnder fringes with period λ for single photons and
//! λ/2 for biphotons, and the coherence envelopes set by the detection filter
//! (single photons) versus the pump linewidth (biphotons).
//!
//! Modules, bottom-up:
//!
//! * [`fock`]: sparse multimode Fock states and ladder operators.
//! * [`optics`]: beam splitters, phase retarders, the Mach-Zehnder transfer
//!   matrix and the lift of a mode unitary to state evolution.
//! * [`detection`]: one-photon, same-port pair and coincidence rates plus
//!   their closed forms.
//! * [`fit`]: least-squares fringe and dip fitting.
//! * [`spectral`]: biphoton joint spectral amplitude and frequency-resolved
//!   scans.
//! * [`experiment`]: configuration, presets and the scan runner behind the
//!   `biphoton` binary.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod experiment;
pub mod fit;
pub mod fock;
pub mod optics;
pub mod quadrature;
pub mod spectral;
pub mod units;

mod error;

pub use error::{Error, Result};
