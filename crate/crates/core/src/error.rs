//! Crate-wide error type.
//!
//! Variants split into two families that callers treat differently:
//! invalid inputs (bad parameters, grid mismatches, domain violations) and
//! internal consistency failures (a quadrature that cannot reach its accuracy
//! target, a covariance matrix that is not positive definite, a certificate
//! inequality that fails). The CLI maps the first family to exit code 1 and
//! the second to exit code 2.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A Hurst parameter outside (0,1), or one that violates an operation's
    /// stricter requirement (e.g. H > 1/2 for pathwise integration).
    InvalidHurst { value: f64, requirement: &'static str },
    /// Argument outside its admissible domain.
    Domain { what: &'static str, value: f64 },
    /// The integration-order range 2H < p < H/(1-H) is violated.
    InvalidP { hurst: f64, p: f64 },
    /// The exponent range 1-H < beta < H/p (with beta != 1 - 2H/p) is violated.
    InvalidBeta { hurst: f64, p: f64, beta: f64 },
    /// A coarse grid size does not divide the fine grid it must stride.
    GridMismatch { n: usize, fine: usize },
    /// The fine grid is too coarse to serve as a Brownian-motion reference.
    ReferenceTooCoarse { fine: usize, max_n: usize },
    /// A structural configuration problem (empty grids, bad sizes, ...).
    Config(&'static str),
    /// Cholesky factorization hit a non-positive pivot beyond tolerance.
    NotPositiveDefinite { pivot: f64, index: usize },
    /// The circulant embedding spectrum has an eigenvalue below -tolerance.
    EmbeddingNotNonnegative { min_eigenvalue: f64 },
    /// Adaptive quadrature exhausted refinement before reaching its accuracy
    /// target; the best estimate and its estimated error are attached.
    QuadratureFailure { estimate: f64, achieved: f64, target: f64 },
    /// The integral-bound certificate inequality failed beyond slack.
    CertificateViolated { value: f64, certificate: f64 },
    /// Calling the pathwise change-of-variable oracle at H = 1/2, where the
    /// limit is the Ito integral and differs by a local-time term.
    ItoOracleAtHalf,
    /// A Monte Carlo estimate whose standard error exceeds half the estimate.
    InsufficientReplicates { n: usize, estimate: f64, stderr: f64 },
    /// Log-log fitting received a non-positive error norm.
    NonPositiveErrorNorm { index: usize, value: f64 },
    /// The fitted decay slope fell short of the proven exponent even after
    /// the one-sided two-sigma allowance.
    RateBoundFailed { slope: f64, stderr: f64, exponent: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidHurst { value, requirement } => {
                write!(f, "invalid Hurst parameter {value}: requires {requirement}")
            }
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::InvalidP { hurst, p } => write!(
                f,
                "p = {p} violates 2H < p < H/(1-H) for H = {hurst} \
                 (admissible range ({}, {}))",
                2.0 * hurst,
                hurst / (1.0 - hurst)
            ),
            Error::InvalidBeta { hurst, p, beta } => write!(
                f,
                "beta = {beta} violates 1-H < beta < H/p, beta != 1-2H/p \
                 for H = {hurst}, p = {p} (admissible range ({}, {}), excluded point {})",
                1.0 - hurst,
                hurst / p,
                1.0 - 2.0 * hurst / p
            ),
            Error::GridMismatch { n, fine } => {
                write!(f, "n = {n} does not divide the fine grid size {fine}; refusing to interpolate")
            }
            Error::ReferenceTooCoarse { fine, max_n } => write!(
                f,
                "fine grid {fine} is too coarse for a Brownian reference against n up to {max_n}; \
                 need fine >= 64 * max(n) = {}",
                64 * max_n
            ),
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::NotPositiveDefinite { pivot, index } => write!(
                f,
                "covariance matrix is not positive definite: pivot {pivot} at index {index}"
            ),
            Error::EmbeddingNotNonnegative { min_eigenvalue } => write!(
                f,
                "circulant embedding spectrum has eigenvalue {min_eigenvalue} below -1e-10"
            ),
            Error::QuadratureFailure { estimate, achieved, target } => write!(
                f,
                "quadrature failed to reach accuracy {target}: best estimate {estimate} \
                 with estimated error {achieved}"
            ),
            Error::CertificateViolated { value, certificate } => write!(
                f,
                "integral value {value} exceeds its certificate {certificate}"
            ),
            Error::ItoOracleAtHalf => write!(
                f,
                "pathwise change-of-variable oracle is invalid at H = 1/2: \
                 the Brownian limit is the Ito integral, which differs by a local-time term"
            ),
            Error::InsufficientReplicates { n, estimate, stderr } => write!(
                f,
                "insufficient replicates at n = {n}: stderr {stderr} exceeds 50% of estimate {estimate}"
            ),
            Error::NonPositiveErrorNorm { index, value } => write!(
                f,
                "error norm {value} at index {index} is not positive; cannot fit on log axes"
            ),
            Error::RateBoundFailed { slope, stderr, exponent } => write!(
                f,
                "fitted slope {slope} + 2 * {stderr} falls short of the theoretical exponent {exponent}"
            ),
        }
    }
}

impl Error {
    /// True for failures of internal consistency (oracle disagreement,
    /// certificate violation, factorization breakdown) as opposed to bad
    /// inputs.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::EmbeddingNotNonnegative { .. }
                | Error::QuadratureFailure { .. }
                | Error::CertificateViolated { .. }
                | Error::NonPositiveErrorNorm { .. }
                | Error::RateBoundFailed { .. }
        )
    }
}
