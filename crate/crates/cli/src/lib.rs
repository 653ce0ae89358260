//! Batch experiments for perclab: configs in, CSV reports out.

pub mod config;
pub mod plot;
pub mod recipes;

/// Usage and schema problems exit with 2, failed checks with 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}
