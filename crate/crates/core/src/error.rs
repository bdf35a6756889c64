use thiserror::Error;

/// Errors reported by the engine.
///
/// Variants are grouped into four failure classes (see [`Error::class`]) so
/// that drivers can map them onto stable exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("divisibility error: {0}")]
    Divisibility(String),
    #[error("series is not regular in `{0}` to the stated precision")]
    NotRegular(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("non-smooth image to precision: {0}")]
    NonSmoothImage(String),
    #[error("morphism image not approximable: {0}")]
    NotApproximable(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("unsolvable over A: {0}")]
    Unsolvable(String),
    #[error("flatness violation: {0}")]
    FlatnessViolation(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("stage `{stage}`: {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
}

/// Coarse failure class of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Precondition,
    Resource,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::UndeclaredVariable(_) => ErrorClass::Parse,
            Error::Resource(_) => ErrorClass::Resource,
            Error::Internal(_) => ErrorClass::Internal,
            Error::Stage { source, .. } => source.class(),
            _ => ErrorClass::Precondition,
        }
    }

    /// Wraps the error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: &'static str) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Strips stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }

    /// Shifts the position of a parse error by a line/column offset.
    pub fn at_line(self, line: usize, column_offset: usize) -> Error {
        match self {
            Error::Parse {
                line: l,
                column,
                message,
            } => Error::Parse {
                line: line + l - 1,
                column: if l == 1 { column + column_offset } else { column },
                message,
            },
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}
