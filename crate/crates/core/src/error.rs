use thiserror::Error;

/// Errors produced by the simulator and the analytic toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value is missing, inconsistent or out of range.
    #[error("configuration error: {0}")]
    Config(String),

    /// The sample rate is too coarse for the Doppler spread of a hop.
    #[error(
        "sample rate {sample_rate_hz} Hz is below {min_ratio}x the Doppler frequency \
         {doppler_hz} Hz of hop `{hop}`"
    )]
    Resolution {
        hop: String,
        sample_rate_hz: f64,
        doppler_hz: f64,
        min_ratio: f64,
    },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// An argument lies outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported topology: operation requires {required} relays, got {got}")]
    UnsupportedTopology { required: usize, got: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
