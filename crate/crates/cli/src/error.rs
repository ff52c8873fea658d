use adiabatic_pointer::constants::ConstantsError;
use adiabatic_pointer::dynamics::DynamicsError;
use adiabatic_pointer::gravity::GravityError;
use adiabatic_pointer::protocols::ProtocolError;
use adiabatic_pointer::quantum::QuantumError;
use adiabatic_pointer::sterngerlach::SternGerlachError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{key}`: {constraint}")]
    Validation { key: String, constraint: String },
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Dataset(String),
    #[error("{0}")]
    Constants(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub const EXIT_PARSE: i32 = 2;
    pub const EXIT_VALIDATION: i32 = 3;
    pub const EXIT_NUMERIC: i32 = 4;
    pub const EXIT_DATASET: i32 = 5;
    pub const EXIT_CONSTANTS: i32 = 6;
    pub const EXIT_IO: i32 = 7;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => Self::EXIT_PARSE,
            CliError::Validation { .. } => Self::EXIT_VALIDATION,
            CliError::Numeric(_) => Self::EXIT_NUMERIC,
            CliError::Dataset(_) => Self::EXIT_DATASET,
            CliError::Constants(_) => Self::EXIT_CONSTANTS,
            CliError::Io(_) => Self::EXIT_IO,
        }
    }

    pub fn validation(key: impl Into<String>, constraint: impl Into<String>) -> Self {
        CliError::Validation {
            key: key.into(),
            constraint: constraint.into(),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<SternGerlachError> for CliError {
    fn from(e: SternGerlachError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<GravityError> for CliError {
    fn from(e: GravityError) -> Self {
        match e {
            GravityError::DatasetCorrupt { .. } => CliError::Dataset(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<ConstantsError> for CliError {
    fn from(e: ConstantsError) -> Self {
        CliError::Constants(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
