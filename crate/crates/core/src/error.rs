use thiserror::Error;

/// Errors produced anywhere in the analysis, simulation, or reporting pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An invalid system or sweep configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Two or more poles of a partial-fraction decomposition coincide (or
    /// nearly so); the closed form is unusable and quadrature must be used.
    #[error("degenerate poles: {0}")]
    DegeneratePoles(String),

    /// Adaptive quadrature hit its subdivision limit before meeting the
    /// requested tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error:e}")]
    NonConvergence { estimate: f64, error: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
