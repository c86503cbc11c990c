use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live in different rings or algebras, or have mismatched arity.
    #[error("context mismatch: {0}")]
    Context(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Image `image` (1-based) has a term that is not of x-degree one.
    #[error("image {image} is not X-linear: offending term `{term}`")]
    NotXLinear { image: usize, term: String },

    #[error("matrix is not invertible over the polynomial ring (det = {det})")]
    NotInvertible { det: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
