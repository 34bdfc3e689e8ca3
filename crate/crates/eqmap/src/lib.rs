//! Command line, file formats, threaded census driver and the acceptance
//! suite on top of [`eqmap_core`].

pub mod census;
pub mod cli;
pub mod corpus;
pub mod io;
pub mod verify;

pub use eqmap_core;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] eqmap_core::Error),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    /// 2 for a failed verification run, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 2,
            _ => 1,
        }
    }
}
