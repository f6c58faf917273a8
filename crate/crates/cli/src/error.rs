use motifkit::discovery::DiscoveryError;
use motifkit::engine::EngineError;
use motifkit::io::LoadError;
use motifkit::nullmodel::NullModelError;
use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// Bad flags, unparsable motif or invalid configuration.
    Usage = 1,
    /// Unreadable or malformed input data, unwritable output.
    Data = 2,
    /// Timeout or other resource exhaustion.
    Resource = 3,
    /// The run completed but found nothing.
    NoResults = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            status: ExitStatus::Usage,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError {
            status: ExitStatus::Data,
            message: message.into(),
        }
    }

    pub fn resource(message: impl Into<String>) -> Self {
        CliError {
            status: ExitStatus::Resource,
            message: message.into(),
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::data(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Timeout { .. } | EngineError::Pool(_) => CliError::resource(e.to_string()),
            EngineError::PredicateType { .. } => CliError::data(e.to_string()),
            EngineError::NoWorkers => CliError::usage(e.to_string()),
        }
    }
}

impl From<NullModelError> for CliError {
    fn from(e: NullModelError) -> Self {
        match e {
            NullModelError::TooFewEdges => CliError::data(e.to_string()),
            NullModelError::InvalidSwapFactor(_) | NullModelError::NoSamples => CliError::usage(e.to_string()),
            NullModelError::Pool(_) => CliError::resource(e.to_string()),
        }
    }
}

impl From<DiscoveryError> for CliError {
    fn from(e: DiscoveryError) -> Self {
        match e {
            DiscoveryError::InvalidConfig(_) => CliError::usage(e.to_string()),
            DiscoveryError::EnsembleFailure(inner) => inner.into(),
            DiscoveryError::Pool(_) => CliError::resource(e.to_string()),
        }
    }
}
