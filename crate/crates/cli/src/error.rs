use std::fmt;

use ipower_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad flag value or unreadable input; names the offending field.
    Config { field: &'static str, message: String },
    /// The state's subsystem A is not a qubit.
    NotQubit(usize),
    /// One or more properties failed.
    Verification(usize),
    /// Numerical failure inside the library.
    Core(Error),
}

impl CliError {
    pub fn config(field: &'static str, message: impl fmt::Display) -> Self {
        CliError::Config { field, message: message.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::NotQubit(_) => 3,
            CliError::Verification(_) | CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => write!(f, "{field}: {message}"),
            CliError::NotQubit(d) => write!(f, "subsystem A has dimension {d}; the interferometric power needs a qubit"),
            CliError::Verification(n) => write!(f, "{n} properties failed"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SubsystemANotQubit(d) => CliError::NotQubit(d),
            Error::ParameterOutOfRange { name, .. } => CliError::config(name, e),
            Error::BadSetting(_) => CliError::config("--setting", e),
            Error::UnknownProbe(_) => CliError::config("--probe", e),
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
