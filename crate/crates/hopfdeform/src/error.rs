use thiserror::Error;

/// Failures that stop a run before a report exists.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent configuration.
    #[error("config error: {0}")]
    Config(String),
    /// The instance lacks a structure the command needs.
    #[error("capability error: {0}")]
    Capability(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Capability(_) => 3,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Classifies a library error by what the user has to change.
pub fn from_core(e: hopfdeform_core::Error) -> CliError {
    use hopfdeform_core::Error as E;
    match e {
        E::CapabilityMissing(_) | E::NoTerminationCertificate | E::NotNormalized | E::Precondition(_) => {
            CliError::Capability(e.to_string())
        }
        other => CliError::Config(other.to_string()),
    }
}
