use thiserror::Error;

use crate::ledger::LedgerResolution;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{survivors} ledger combinations survive, expected exactly one")]
    Ambiguity { survivors: usize, evidence: Box<LedgerResolution> },
    #[error("resolved ledger differs between draws: {0:?}")]
    Unstable(Vec<String>),
    #[error("no generic parameter draw found after {0} attempts")]
    NoGenericDraw(usize),
    #[error(transparent)]
    Core(#[from] laumon::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
