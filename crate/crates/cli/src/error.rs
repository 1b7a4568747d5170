//! CLI error type and its exit-code mapping.
//!
//! Exit 1: bad configuration, parameter-range violations, IO problems.
//! Exit 2: internal consistency failures (certificate violations, oracle
//! disagreement, quadrature that cannot reach its target).

use std::fmt;
use std::path::PathBuf;

pub type AppResult<T> = Result<T, AppError>;

#[derive(Debug)]
pub enum AppError {
    Core(fbmrate_core::Error),
    Io { path: PathBuf, source: std::io::Error },
    Json { path: PathBuf, source: serde_json::Error },
    Csv { path: PathBuf, source: csv::Error },
    Invalid(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            AppError::Json { path, source } => write!(f, "{}: {source}", path.display()),
            AppError::Csv { path, source } => write!(f, "{}: {source}", path.display()),
            AppError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<fbmrate_core::Error> for AppError {
    fn from(e: fbmrate_core::Error) -> Self {
        AppError::Core(e)
    }
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> AppError {
        let path = path.into();
        move |source| AppError::Io { path, source }
    }

    /// Exit status for `main`: 2 for internal consistency failures, 1 for
    /// everything the caller can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fbmrate_core::Error;

    #[test]
    fn exit_codes_split_validation_from_consistency() {
        let validation = [
            Error::InvalidP { hurst: 0.75, p: 1.4 },
            Error::GridMismatch { n: 5, fine: 16 },
            Error::ItoOracleAtHalf,
        ];
        for e in validation {
            assert_eq!(AppError::Core(e).exit_code(), 1);
        }
        let internal = [
            Error::CertificateViolated { value: 2.0, certificate: 1.0 },
            Error::QuadratureFailure { estimate: 0.1, achieved: 1e-3, target: 1e-10 },
            Error::RateBoundFailed { slope: 0.1, stderr: 0.01, exponent: 0.5 },
        ];
        for e in internal {
            assert_eq!(AppError::Core(e).exit_code(), 2);
        }
        assert_eq!(AppError::Invalid("x".into()).exit_code(), 1);
    }
}
