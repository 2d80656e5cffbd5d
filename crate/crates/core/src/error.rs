use thiserror::Error;

use crate::coefficients::CoefficientError;
use crate::engine::EngineError;
use crate::grading::GradingError;
use crate::oracle::OracleError;
use crate::pages::PageError;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error(transparent)]
    Page(#[from] PageError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("window insufficient: {0}")]
    WindowInsufficient(String),
    #[error("region outside window: {0}")]
    RegionOutsideWindow(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Is this a failure of the differential pattern itself (as opposed to
    /// bad input)?
    pub fn is_pattern_violation(&self) -> bool {
        matches!(
            self,
            Error::Engine(EngineError::PatternViolation { .. }) | Error::TheoremViolation(_)
        )
    }
}
