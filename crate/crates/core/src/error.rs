use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0:?} is not irreducible of the requested degree over F_{1}")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("no built-in modulus for F_{p}^{r}; supply one explicitly")]
    MissingModulus { p: u32, r: u32 },
    #[error("field size {q} exceeds the configured maximum {max}")]
    FieldTooLarge { q: u64, max: u64 },
    #[error("invalid field element index {0}")]
    InvalidElement(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid register index {0}")]
    InvalidRegister(usize),
    #[error("basis vectors are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("oracle misuse: {0}")]
    Oracle(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("reduction failed: {0}")]
    ReductionFailed(String),
    #[error("not a 0/1 matrix: {0}")]
    NonBinary(String),
    #[error("linear program is inconsistent: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
