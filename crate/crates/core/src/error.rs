use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("point {0} lies outside the domain")]
    OutsideDomain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("coefficient is discontinuous at breakpoint {0}")]
    Discontinuous(String),
    #[error("root solver did not converge at t = {0}")]
    NoConvergence(String),
    #[error("unresolved order: {0}")]
    UnresolvedOrder(String),
    #[error("insufficient smoothness budget at t0 = {t0}: {detail}")]
    InsufficientSmoothness { t0: String, detail: String },
    #[error("ambiguous clustering: root gap {gap:e} within [{eps:e}, {band:e}]")]
    AmbiguousClustering { gap: f64, eps: f64, band: f64 },
    #[error("series lift did not converge (residual {0:e})")]
    LiftDidNotConverge(f64),
    #[error("recursion depth cap {0} exceeded")]
    DepthExceeded(usize),
    #[error("curve is not hyperbolic at t = {0}")]
    NotHyperbolic(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Errors meaning the theorems' hypotheses fail, as opposed to bad input.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::InsufficientSmoothness { .. } | Error::NotHyperbolic(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
