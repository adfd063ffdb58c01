use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Graph {
        path: PathBuf,
        #[source]
        source: mpcvc::Error,
    },

    #[error("seed {seed}: {source}")]
    Run {
        seed: u64,
        #[source]
        source: mpcvc::Error,
    },

    #[error(transparent)]
    Core(#[from] mpcvc::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 2 for configuration and input problems, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        use mpcvc::Error as E;
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::Graph { .. } => 2,
            CliError::Run { source, .. } | CliError::Core(source) => match source {
                E::Parameter(_) | E::Parse { .. } | E::Io(_) => 2,
                E::Capacity(_) | E::Refused(_) | E::Invariant(_) => 1,
            },
        }
    }
}

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Config(msg.into()))
}
