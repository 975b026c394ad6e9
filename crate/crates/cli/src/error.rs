use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Validation { line: Option<usize>, message: String },

    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Verification(String),

    #[error("{0}")]
    Numerical(#[from] qcarnot::Error),

    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl CliError {
    /// 1 for bad input or a failed check, 2 for numerical and I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation { .. } | CliError::Input(_) | CliError::Verification(_) => 1,
            CliError::Numerical(_) | CliError::Io { .. } => 2,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }
}
