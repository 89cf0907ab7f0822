//! File formats, SVG charts, parallel sweeps and the `semantica` command
//! line on top of [`semantica_core`].

pub mod cli;
pub mod io;
pub mod svg;
pub mod sweep;

pub use semantica_core;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for bad flags, missing files and invalid parameters.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for numeric failures such as diverged training.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
    #[error(transparent)]
    Core(#[from] semantica_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        use semantica_core::Error as E;
        match self {
            AppError::Numeric(_) => EXIT_NUMERIC,
            AppError::Core(E::Numeric(_) | E::TrainingDiverged { .. }) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        }
    }
}

/// `semantica <version>`, recorded in every output file.
pub fn version_string() -> String {
    format!("semantica {}", env!("CARGO_PKG_VERSION"))
}
