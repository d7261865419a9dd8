use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Precondition(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("truncation: {0}")]
    Truncation(String),

    #[error("integrator failed to reach tolerance {requested:e} (achieved {achieved:e}) at z = {at:e}")]
    Numerical { requested: f64, achieved: f64, at: f64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("division by zero: {0}")]
    Division(String),

    #[error("configuration error(s):\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("unknown figure {0} (expected 1..=21)")]
    UnknownFigure(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
