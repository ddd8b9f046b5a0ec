use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] locent::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
    #[error("need at least 3 distinct d values, found {0}")]
    InsufficientData(usize),
    #[error("bound value {value} at d={d} is not positive")]
    NonpositiveValues { d: usize, value: f64 },
}

impl CliError {
    /// 3 when the request is well formed but has no solution, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        use locent::Error as E;
        match self {
            CliError::Core(E::TooSmall(_) | E::NoValidAssignment(_) | E::NoValidLayout(_)) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
