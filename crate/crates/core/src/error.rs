use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("argument outside the domain of the formula: {0}")]
    Domain(String),
    #[error("zero initial strength is a fixed point of the deep dynamics")]
    FixedPoint,
    #[error("degenerate structure: {0}")]
    DegenerateStructure(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("typicality undefined for mode {mode}: singular value is zero")]
    UndefinedTypicality { mode: usize },
    #[error("similarity matrix is not block-constant on the partition (spread {spread:e})")]
    NotUltrametric { spread: f64 },
    #[error("cannot anchor fast learning on a zero hidden representation")]
    CannotAnchor,
    #[error("training diverged at epoch {epoch}")]
    TrainingDiverged { epoch: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
