use std::path::PathBuf;

#[derive(thiserror::Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] swe_core::Error),

    #[error("{message}")]
    Config { message: String },

    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self::Config {
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Self::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    /// Stable machine-readable category.
    pub fn kind(&self) -> &'static str {
        use swe_core::Error as E;
        match self {
            Self::Config { .. } => "config",
            Self::Io { .. } => "io",
            Self::Core(e) => match e {
                E::BlowUp { .. } => "blowup",
                E::StepFailed { .. } => "step",
                E::NotConverged(_) => "solver",
                E::NonPositiveDepth { .. } => "depth",
                E::Io { .. } | E::MshParse { .. } => "mesh-io",
                E::UnknownFamily(_) | E::InvalidArgument(_) => "config",
                _ => "internal",
            },
        }
    }

    /// `error[<kind>]: <message>` on a single line.
    pub fn one_line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {msg}", self.kind())
    }
}

pub type CliResult<T> = Result<T, CliError>;
