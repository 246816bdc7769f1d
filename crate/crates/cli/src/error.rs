use std::path::PathBuf;

/// Everything a command can fail with, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] lossy_optics::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for parse and configuration problems, 2 when the input matrix has
    /// gain, 3 when a verification check is breached.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(lossy_optics::Error::Gain { .. }) => 2,
            CliError::Core(lossy_optics::Error::Verification(_)) | CliError::Verification(_) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
