use orthoprob_core::cox::CoxError;
use orthoprob_core::formats::FormatError;
use orthoprob_core::hilbert::HilbertError;
use orthoprob_core::states::StateError;
use orthoprob_core::LatticeError;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Violation(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Violation(_) => EXIT_VIOLATION,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::TooLarge { .. } | LatticeError::SizeOutOfRange { .. } => CliError::Cap(e.to_string()),
            LatticeError::LawViolation { .. } => CliError::Violation(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Invalid(LatticeError::TooLarge { .. }) => CliError::Cap(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::DimensionCap { .. } => CliError::Cap(e.to_string()),
            StateError::NoState => CliError::Violation(e.to_string()),
            StateError::Lattice(l) => l.into(),
            StateError::Format(f) => f.into(),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::ClosureOverflow { .. } => CliError::Cap(e.to_string()),
            HilbertError::Format(_) => CliError::Parse(e.to_string()),
            _ => CliError::Violation(e.to_string()),
        }
    }
}

impl From<CoxError> for CliError {
    fn from(e: CoxError) -> Self {
        match e {
            CoxError::Format(_) | CoxError::UnknownBuiltin(_) | CoxError::ValueCount { .. } | CoxError::BadGrid => {
                CliError::Parse(e.to_string())
            }
            CoxError::BadUnit => CliError::Usage(e.to_string()),
            _ => CliError::Violation(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(format!("json: {e}"))
    }
}
