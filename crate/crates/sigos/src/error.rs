use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("resolution too coarse: omega step must be <= {required:.6e}, got {got:.6e}")]
    Resolution { required: f64, got: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("core curve solve failed for packet (theta={theta}, v={v:?}): {reason}")]
    CoreSolve {
        theta: usize,
        v: Vec<f64>,
        reason: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Process exit code per the CLI contract: 1 for parameter/config/IO
    /// errors, 2 for assertion (acceptance-level) failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Assertion(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
