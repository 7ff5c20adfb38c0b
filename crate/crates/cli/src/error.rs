use thiserror::Error;

#[derive(Debug, Error)]
pub enum JobError {
    #[error("invalid job: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] upq_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl JobError {
    /// 2 for bad input, 3 for a singular parameter point, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        use upq_core::Error as E;
        match self {
            JobError::Validation(_) | JobError::Config(_) => 2,
            JobError::Core(e) if e.is_singular() => 3,
            JobError::Core(E::InvalidTolerance(_) | E::InvalidTruncation | E::Domain(_)) => 2,
            JobError::Core(_) | JobError::Io(_) | JobError::Csv(_) => 1,
        }
    }
}
