use densefew_core::{CountError, GaleError, SupportError};
use thiserror::Error;

/// Failures of a command, one variant per exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Assertion(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("algebraic precondition failed: {0}")]
    Precondition(String),
    #[error("counting degeneracy: {0}")]
    Degeneracy(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Assertion(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Degeneracy(_) => 5,
        }
    }
}

impl From<SupportError> for CliError {
    fn from(e: SupportError) -> Self {
        match e {
            SupportError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GaleError> for CliError {
    fn from(e: GaleError) -> Self {
        match e {
            GaleError::Shape { .. }
            | GaleError::RelationWidth(_)
            | GaleError::IndexOutOfRange { .. } => CliError::Input(e.to_string()),
            GaleError::Support(s) => s.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::NotBivariate
            | CountError::RegionArity { .. }
            | CountError::UnsupportedEll(_) => CliError::Input(e.to_string()),
            CountError::Gale(g) => g.into(),
            _ => CliError::Degeneracy(e.to_string()),
        }
    }
}

impl From<densefew_core::LatticeError> for CliError {
    fn from(e: densefew_core::LatticeError) -> Self {
        CliError::Precondition(e.to_string())
    }
}
