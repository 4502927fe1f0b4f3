use fldkit::classes::ClassError;
use fldkit::fld::FldError;
use fldkit::{FormulaError, PosetError};
use thiserror::Error;

/// Errors surfaced by commands, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Semantic(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Semantic(_) => "semantic",
            CliError::Budget(_) => "budget",
        }
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::Json(_) => CliError::Parse(e.to_string()),
            PosetError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Semantic(e.to_string()),
        }
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::Syntax { .. } => CliError::Parse(e.to_string()),
            FormulaError::Poset(p) => p.into(),
            _ => CliError::Semantic(e.to_string()),
        }
    }
}

impl From<FldError> for CliError {
    fn from(e: FldError) -> Self {
        match e {
            FldError::Poset(p) => p.into(),
            FldError::Formula(f) => f.into(),
            _ => CliError::Semantic(e.to_string()),
        }
    }
}

impl From<ClassError> for CliError {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::Poset(p) => p.into(),
            _ => CliError::Parse(e.to_string()),
        }
    }
}
