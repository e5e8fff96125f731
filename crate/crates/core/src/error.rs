use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode {mode} out of range for a {modes}-mode space")]
    InvalidMode { mode: usize, modes: usize },
    #[error("dimension mismatch: {left} modes vs {right} modes")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis size {size} exceeds cap {cap}")]
    BasisTooLarge { size: usize, cap: usize },
    #[error("coherent truncation {truncation} too small: tail weight {tail:e} above {threshold:e}")]
    TruncationTooSmall { truncation: u32, tail: f64, threshold: f64 },
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("coincidence needs two distinct modes, got {0} twice; use the same-port pair rate")]
    IdenticalModes(usize),
    #[error("formula {formula} {reason}")]
    FormulaArgument {
        formula: &'static str,
        reason: &'static str,
    },
    #[error("invalid scan: {0}")]
    InvalidScan(String),
    #[error("fit did not converge: relative residual {residual:e} above {threshold:e}")]
    FitNonConvergence { residual: f64, threshold: f64 },
    #[error("spectral grid too coarse: {points} points across the filter band, need at least {required}")]
    GridTooCoarse { points: usize, required: usize },
    #[error("invalid spectral parameter: {0}")]
    InvalidSpectral(String),
}
