use thiserror::Error;

#[derive(Debug, Error)]
pub enum TqftError {
    #[error("invalid level {0}: expected an odd integer >= 3")]
    InvalidLevel(i64),
    #[error("field mismatch: C_{left} vs C_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero in the cyclotomic field")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed tree: {0}")]
    InvalidTree(String),
    #[error("invalid color {color} (level {level}): {reason}")]
    InvalidColor { color: i64, level: u32, reason: &'static str },
    #[error("inadmissible colors ({0}, {1}, {2})")]
    Inadmissible(u32, u32, u32),
    #[error("no such edge {0}")]
    InvalidEdge(usize),
    #[error("no such handle {0}")]
    InvalidHandle(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("determinant is {0}, expected 1")]
    NotUnimodular(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl TqftError {
    /// Invalid user input as opposed to a failure while computing.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            TqftError::InvalidLevel(_)
                | TqftError::Parse(_)
                | TqftError::InvalidTree(_)
                | TqftError::InvalidColor { .. }
                | TqftError::InvalidEdge(_)
                | TqftError::InvalidHandle(_)
                | TqftError::NotUnimodular(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, TqftError>;
