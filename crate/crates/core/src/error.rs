use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A transform input does not decay at the edge of its grid.
    #[error("truncation: modulus {edge:e} at the grid edge exceeds {limit:e}")]
    Truncation { edge: f64, limit: f64 },

    /// The cubic level equation has no root on the branch that connects to
    /// the harmonic spectrum.
    #[error("level {n} breaks down: x^3 - x = {beta} has no root on the harmonic branch")]
    LevelBreakdown { n: usize, beta: f64 },

    /// Refining the eigensolver grid moved an eigenvalue by more than the
    /// accepted amount.
    #[error("grid too coarse: level {n} moved by {change:e} under refinement")]
    Resolution { n: usize, change: f64 },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: {message}")]
    Validation { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures caused by unreadable or malformed input rather than
    /// by values outside a model's domain.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Io(_))
    }
}
