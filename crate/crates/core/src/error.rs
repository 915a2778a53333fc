use core::fmt;

/// Failures surfaced by the numerical and physical layers.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    InvalidInput(&'static str),
    /// A quantity that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// The operation has an integrable or genuine singularity at the input.
    SingularInput(&'static str),
    /// An adaptive scheme exhausted its budget before meeting tolerance.
    NotConverged {
        what: &'static str,
        value: f64,
        error_estimate: f64,
    },
    /// An extrapolation tableau failed to settle.
    ExtrapolationFailed { value: f64, error_estimate: f64 },
    /// Independent continuation ladders disagree beyond tolerance.
    ContinuationMismatch { q2: f64, first: f64, second: f64 },
    /// The requested frequency lies at or above the resonance threshold.
    DivergentResponse { omega: f64, threshold: f64 },
    /// A drive velocity violates the slow-motion assumption.
    Relativistic { speed_fraction: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::NonFinite(what) => write!(f, "non-finite value: {what}"),
            Error::SingularInput(what) => write!(f, "singular input: {what}"),
            Error::NotConverged {
                what,
                value,
                error_estimate,
            } => write!(
                f,
                "{what} did not converge (value {value:e}, error estimate {error_estimate:e})"
            ),
            Error::ExtrapolationFailed { value, error_estimate } => write!(
                f,
                "extrapolation did not settle (value {value:e}, error estimate {error_estimate:e})"
            ),
            Error::ContinuationMismatch { q2, first, second } => write!(
                f,
                "continuation ladders disagree at Q^2 = {q2:e}: {first:e} vs {second:e}"
            ),
            Error::DivergentResponse { omega, threshold } => write!(
                f,
                "frequency {omega:e} is at or above the resonance threshold {threshold:e}"
            ),
            Error::Relativistic { speed_fraction } => write!(
                f,
                "drive speed is {speed_fraction:e} c; slow-motion validity requires < 0.01 c"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
