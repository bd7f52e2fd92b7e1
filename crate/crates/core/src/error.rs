use thiserror::Error;

/// Errors raised by constellation construction, metrics, simulation and scoring.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate constellation: {0}")]
    DegenerateConstellation(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("unsupported scheme: {0}")]
    UnsupportedScheme(String),

    #[error("singular channel: |h| = 0")]
    SingularChannel,

    #[error("Rayleigh penalty undefined for zero AWGN SER")]
    UndefinedPenalty,

    #[error("energy per successful symbol undefined at SER = 1")]
    UndefinedEnergy,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
            _ => Error::Parse(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
