use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point coordinates must be finite and non-negative (coordinate {index} is {value})")]
    InvalidCoordinate { index: usize, value: f64 },

    #[error("a point needs at least one coordinate")]
    EmptyPoint,

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported polytope form: {0}")]
    UnsupportedPolytope(String),

    #[error("LDGM-G requires orthogonal ε")]
    NonOrthogonalSteps,

    #[error("degenerate objective: every sampled marginal had a vanishing denominator")]
    DegenerateObjective,

    #[error("objective `{0}` does not decompose into per-term contributions")]
    NotDecomposable(String),

    #[error("objective `{0}` has no analytic gradient")]
    GradientUnavailable(String),

    #[error("solver `{solver}` cannot run on constraint `{constraint}`")]
    UnsupportedConstraint { solver: String, constraint: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
