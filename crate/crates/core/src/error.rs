use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("omega^2 is not finite at t = {t}")]
    NonFiniteFrequency { t: f64 },

    #[error("Wronskian drift {max_drift:.3e} exceeds tolerance {tolerance:.3e}")]
    WronskianDrift { max_drift: f64, tolerance: f64 },

    #[error("t = {t} outside trajectory range [0, {t_end}]")]
    OutOfRange { t: f64, t_end: f64 },

    #[error("Hermite order {0} exceeds the supported maximum of 200")]
    UnsupportedOrder(usize),

    #[error("{what}: imaginary residue {residue:.3e} above threshold")]
    ImaginaryResidue { what: &'static str, residue: f64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("caustic at t = {t}: |sin t| = {sin_t:.3e}, propagator is singular")]
    Caustic { t: f64, sin_t: f64 },

    #[error("degenerate frame (mu, nu) = ({mu}, {nu}): |r| = 0")]
    DegenerateFrame { mu: f64, nu: f64 },

    #[error("frame with nu = 0 is not supported by the density-matrix transform")]
    UnsupportedFrame,

    #[error("unsupported drive profile: {0}")]
    UnsupportedProfile(String),

    #[error("quadrature not converged: refinement changed the result by {change:.3e}")]
    NotConverged { change: f64 },

    #[error("grid format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
