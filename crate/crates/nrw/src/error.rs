use thiserror::Error;

/// Everything that can go wrong in the closed forms, the oracle or the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("eigensolve did not converge: {0}")]
    NonConvergence(String),

    #[error("eigenvalue {value:e} of -sigma G sigma G is negative beyond tolerance")]
    NegativeSquare { value: f64 },

    #[error("complex spectrum: discriminant {discriminant:e} is negative")]
    ComplexSpectrum { discriminant: f64 },

    #[error("degenerate kernel: determinant {det:e} is not positive")]
    DegenerateKernel { det: f64 },

    #[error("{quantity}: imaginary residue {imag:e} exceeds tolerance (real part {real:e})")]
    ImaginaryResidue {
        quantity: &'static str,
        real: f64,
        imag: f64,
    },

    #[error("critical damping: discriminant {discriminant:e} too close to zero for an eigenbasis")]
    CriticalDamping { discriminant: f64 },

    #[error("state is already separable at t = 0, no sudden-death bracket")]
    NoBracket,

    #[error("harmonic coupling requires identical baths")]
    UnequalBaths,

    #[error("step size underflow at t = {t:e}")]
    StepFailure { t: f64 },

    #[error("finite differences disagree: steps give {coarse:e} and {fine:e}")]
    RoughKernel { coarse: f64, fine: f64 },

    #[error("Nystrom grid too coarse: top eigenvalue moved by {shift:e} on node doubling")]
    GridTooCoarse { shift: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

pub(crate) fn non_negative(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be non-negative and finite, got {value}"
        )))
    }
}
