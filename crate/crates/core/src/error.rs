use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("empty expansion window: to ({to}) < from ({from})")]
    EmptyWindow { from: i64, to: i64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("singular pencil: det(λE - A) vanishes identically")]
    SingularPencil,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("the pair (E^-1 A, E^-1 B) is not controllable")]
    Uncontrollable,

    #[error("assigned eigenvalue {0} collides with a pole or zero of the transfer function")]
    Collision(String),

    #[error("{0} is a pole of the transfer function; use the pole-removal pipeline instead")]
    PoleAtPoint(String),

    #[error("matrix is not unimodular over the local ring at {0}")]
    NotLocallyUnimodular(String),

    #[error("system matrix is not minimal")]
    NotMinimal,

    #[error("{0} is only available on the exact backend")]
    ExactOnly(&'static str),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
