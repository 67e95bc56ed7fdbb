use std::fmt::Display;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{stage} failed: {message}")]
    Pipeline { stage: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Pipeline { .. } => 1,
        }
    }
}

/// Wrap an error of pipeline stage `stage`.
pub fn at<E: Display>(stage: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::Pipeline {
        stage,
        message: e.to_string(),
    }
}
