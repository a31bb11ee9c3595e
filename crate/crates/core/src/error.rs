use thiserror::Error;

/// Errors produced by the library.
///
/// The `Display` strings start with the stable kebab-case code used by the
/// CLI and by tests (`not-admissible`, `invalid-rho`, ...).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not-admissible: {0}")]
    NotAdmissible(String),
    #[error("unbounded-region: {0}")]
    UnboundedRegion(String),
    #[error("invalid-rho: {0} (expected 0 <= rho < 1)")]
    InvalidRho(f64),
    #[error("invalid-gamma: {0}")]
    InvalidGamma(String),
    #[error("invalid-tolerance: {0}")]
    InvalidTolerance(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad-orientation at line {line}: norm {norm}")]
    BadOrientation { line: usize, norm: f64 },
    #[error("io: {0}")]
    Io(String),
    #[error("nonplanar: {0}")]
    Nonplanar(String),
    #[error("triangulation-failed: {0}")]
    TriangulationFailed(String),
    #[error("decomposition-violated: {0}")]
    DecompositionViolated(String),
    #[error("unsupported-gamma: {0}")]
    UnsupportedGamma(f64),
    #[error("shell-violated: {0}")]
    ShellViolated(String),
    #[error("profile-hypotheses: {0}")]
    ProfileHypotheses(String),
    #[error("not-connected")]
    NotConnected,
    #[error("too-small: {0}")]
    TooSmall(String),
    #[error("oracle-limit: {0}")]
    OracleLimit(String),
    #[error("invalid-argument: {0}")]
    InvalidArgument(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
