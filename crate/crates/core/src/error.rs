use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice index {0} out of range 0..15")]
    IndexOutOfRange(usize),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("coefficient vector does not define a smooth quartic: {0}")]
    NotSmooth(String),
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("cone has empty interior")]
    EmptyCone,
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("triangulation is not generic; lifting conditions of class (C) are unknown")]
    NonGeneric,
    #[error("expected 7 deformation motifs, the catalog matched {found}")]
    MotifCount { found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("malformed filter: {0}")]
    Filter(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
