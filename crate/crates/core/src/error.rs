use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimate {estimate}, error estimate {error_estimate}")]
    Quadrature { estimate: f64, error_estimate: f64 },

    #[error("family sum has a pole at Δθ = {0} (aligned boundaries)")]
    Pole(f64),

    #[error("λ grid too coarse: {points_per_width:.3} points per kick width, need at least {required}")]
    Resolution { points_per_width: f64, required: f64 },

    #[error("bridge sampler gave up at step {step} of {steps} after {tries} proposals (remaining rotation {remaining})")]
    Bridge {
        step: usize,
        steps: usize,
        tries: u64,
        remaining: f64,
    },

    #[error("setting {0} is not one of the configured CHSH settings")]
    UnknownSetting(f64),

    #[error("mutual information did not converge: fine grid {fine} bits, coarse grid {coarse} bits")]
    MutualInfo { fine: f64, coarse: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
