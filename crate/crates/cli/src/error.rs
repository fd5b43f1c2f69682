use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot parse {path}: {source}")]
    Parse { path: String, source: toml::de::Error },

    #[error(transparent)]
    Core(#[from] rqm_core::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit code for this error: 2 for anything the user can fix in the
    /// configuration (including presets and memory budget), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parse { .. } => 2,
            CliError::Core(e) => match e {
                rqm_core::Error::UnknownPreset(_)
                | rqm_core::Error::InvalidLattice(_)
                | rqm_core::Error::MemoryBudget { .. }
                | rqm_core::Error::MasslessReduction
                | rqm_core::Error::TimeDependentHamiltonian
                | rqm_core::Error::NonHermitian(_) => 2,
                _ => 1,
            },
            _ => 1,
        }
    }
}
