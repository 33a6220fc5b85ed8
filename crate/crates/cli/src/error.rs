use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse scenario: {0}")]
    Parse(String),

    #[error("invalid scenario field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("cannot write report: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation { .. } => 2,
            CliError::Io(_) => 1,
        }
    }
}
