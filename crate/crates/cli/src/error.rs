use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{file}:{line}: {message}")]
    Schema { file: String, line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 0 success, 1 I/O failure, 2 schema or config error, 3 missing data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::Config(_) => 2,
            CliError::MissingData(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn schema(path: &Path, line: usize, message: impl ToString) -> CliError {
        CliError::Schema { file: path.display().to_string(), line, message: message.to_string() }
    }
}
