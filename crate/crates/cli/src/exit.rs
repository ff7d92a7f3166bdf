//! Error-to-exit-code mapping (sysexits style).

use msfbench_core::Error as CoreError;

pub const EXIT_PARTIAL: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_NOINPUT: u8 = 66;

#[derive(Debug)]
pub enum CliError {
    /// Arguments parsed but make no sense together (exit 64).
    Usage(String),
    /// An input file or directory does not exist (exit 66).
    MissingInput(String),
    /// Input exists but cannot be understood (exit 65).
    Data(String),
    /// The run finished but some frames failed (exit 2).
    PartialFailure { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::MissingInput(_) => EXIT_NOINPUT,
            CliError::Data(_) => EXIT_DATA,
            CliError::PartialFailure { .. } => EXIT_PARTIAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::MissingInput(m) | CliError::Data(m) => f.write_str(m),
            CliError::PartialFailure { failed, total } => {
                write!(f, "{failed} of {total} frames failed")
            }
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match &e {
            CoreError::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => {
                CliError::MissingInput(e.to_string())
            }
            CoreError::EmptyDataset { .. } => CliError::MissingInput(e.to_string()),
            CoreError::SeverityOutOfRange { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::MissingInput(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}
