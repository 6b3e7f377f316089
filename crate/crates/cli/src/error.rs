use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] hadamard_weak::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    /// Every error is an input or precondition failure as far as the exit
    /// status is concerned.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

pub fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}
