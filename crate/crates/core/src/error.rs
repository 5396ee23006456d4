use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The unscaled modified Bessel function does not fit in an `f64`.
    #[error("overflow evaluating {0}; use the scaled variant")]
    Overflow(&'static str),

    /// A quadrature finished but its error estimate exceeds the caller's tolerance.
    #[error(
        "quadrature did not converge: estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    NonConvergence { estimate: f64, tolerance: f64 },

    /// |sin(ωt)| is below the caustic tolerance.
    #[error("caustic at t = {t} (|sin ωt| = {sin_abs:.3e}); nearest caustic time {nearest}")]
    CausticSingularity { t: f64, sin_abs: f64, nearest: f64 },

    #[error("matrix is not traceless (trace magnitude {0:.3e})")]
    NonTraceless(f64),

    /// A disentangling identity was requested outside its validity window.
    #[error("{identity} is undefined at ωt = {omega_t}: {reason}")]
    IdentityWindow {
        identity: &'static str,
        omega_t: f64,
        reason: &'static str,
    },

    #[error("wavefunction support does not fit the grid: {0}")]
    SupportOverflow(String),

    #[error("boundary contamination: edge amplitude ratio {ratio:.3e} exceeds {threshold:.1e}")]
    BoundaryContamination { ratio: f64, threshold: f64 },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
