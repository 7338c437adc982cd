use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad flags, bad config values, malformed or inconsistent input files.
    #[error("{0}")]
    Config(String),
    #[error("invalid input: {0}")]
    Input(grassmann_core::Error),
    #[error(transparent)]
    Core(#[from] grassmann_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
}

impl HarnessError {
    /// `2` for usage and input problems, `1` for failures of the computation itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub(crate) fn config_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}
