use std::fmt;

use hrgen_core::{CnfError, CountingError, OracleError, SampleError};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_EMPTY_SLICE: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<SampleError> for Failure {
    fn from(e: SampleError) -> Self {
        let code = match e {
            SampleError::EmptySlice { .. } | SampleError::OutOfRange { .. } => EXIT_EMPTY_SLICE,
            SampleError::UnknownNonterminal(_) => EXIT_INPUT,
            SampleError::NotCnf
            | SampleError::TablesTooSmall { .. }
            | SampleError::MissingRow(_)
            | SampleError::InconsistentTables { .. } => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<CnfError> for Failure {
    fn from(e: CnfError) -> Self {
        let code = match e {
            CnfError::Invalid(_) | CnfError::UnitCycle(_) | CnfError::TooManyNullable { .. } => EXIT_INPUT,
            CnfError::NotCnf(_) | CnfError::Replacement(_) => EXIT_INTERNAL,
        };
        Failure { code, message: format!("normalization failed: {e}") }
    }
}

impl From<CountingError> for Failure {
    fn from(e: CountingError) -> Self {
        let code = match e {
            CountingError::Json(_) | CountingError::Malformed(_) => EXIT_INPUT,
            _ => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::UnknownNonterminal(_) | OracleError::CapExceeded { .. } | OracleError::Unbounded { .. } => {
                EXIT_INPUT
            }
            _ => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}
