use std::path::PathBuf;

/// Errors produced by lattice operations, projections and solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("window radius must be at least 1, got {0}")]
    InvalidWindow(usize),
    #[error("window too small: need radius >= {required}, got {actual}")]
    WindowTooSmall { required: usize, actual: usize },
    #[error("window mismatch: expected radius {expected}, got {actual}")]
    WindowMismatch { expected: usize, actual: usize },
    #[error("sequence length {len} does not match window radius {radius}")]
    LengthMismatch { len: usize, radius: usize },
    #[error("non-finite value at site {site}")]
    NonFinite { site: i64 },
    #[error("non-positive coefficient {name}({site}) = {value}")]
    NonPositiveCoefficient { name: &'static str, site: i64, value: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("p = {0} is not an even positive integer")]
    OddP(f64),
    #[error("negative scale {0}")]
    NegativeScale(f64),
    #[error("tau must be positive, got {0}")]
    NonPositiveTau(f64),
    #[error("index out of range: i = {i}, j = {j}, p/2 = {half}")]
    IndexOutOfRange { i: i64, j: i64, half: i64 },
    #[error("zero reference scale in ratio")]
    DivisionByZeroScale,
    #[error("1-D maximization did not bracket an interior maximum")]
    MaximizationFailure,
    #[error("no sign change of the fiber derivative within expansion limits")]
    BracketFailure,
    #[error("sequence is identically zero")]
    ZeroSequence,
    #[error("diagonal sign conditions not attainable on this window")]
    BoxFailure,
    #[error("sequence is one-signed (u+ or u- vanishes)")]
    OneSigned,
    #[error("two-dimensional projection failed to reach tolerance (residuals {0:e}, {1:e})")]
    ProjectionFailure(f64, f64),
    #[error("descent stalled: step fell below {0:e}")]
    Stalled(f64),
    #[error("no start converged ({starts} starts)")]
    NoConvergedStart { starts: usize, diagnostics: Vec<String> },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error at {path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
