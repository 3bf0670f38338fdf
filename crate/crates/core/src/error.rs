use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands belong to different rings")]
    RingMismatch,

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("action does not preserve the relations (relation row {row:?})")]
    ActionNotCompatible { row: Vec<String> },

    #[error("module does not satisfy the ring modulus (row {row:?})")]
    ModulusViolated { row: Vec<String> },

    #[error("not a submodule: {0}")]
    NotSubmodule(String),

    #[error("not a module homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("desk-scale limit exceeded: cofactor {cofactor} has no factor below the trial-division bound {bound}")]
    FactorLimit { cofactor: String, bound: u64 },

    #[error("module is infinite")]
    InfiniteModule,

    #[error("enumeration cap exceeded: {size} > {cap}")]
    CapExceeded { size: String, cap: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by the input data rather than by a computation limit.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::FactorLimit { .. } | Error::CapExceeded { .. } | Error::InfiniteModule | Error::Unsupported(_))
    }
}
