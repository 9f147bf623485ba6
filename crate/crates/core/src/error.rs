use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no finite root system of type {label}{rank}")]
    InvalidType { label: String, rank: usize },

    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("Weyl group has more than {cap} elements (raise the order cap to enumerate it)")]
    GroupTooLarge { cap: usize },

    #[error("simple root index {index} is outside 1..={rank}")]
    RootIndex { index: usize, rank: usize },

    #[error("element with reduced word {word:?} is not in the parabolic subgroup W_{set}")]
    NotInParabolic { word: Vec<u8>, set: String },

    #[error("boundary position {position} is outside 1..={available}")]
    BoundaryPosition { position: usize, available: usize },

    #[error("boundary color index must be 1 (red) or 2 (blue), got {0}")]
    BoundaryColor(usize),

    #[error("boundary maps do not compose to zero (d_{degree} o d_{next} != 0)", next = .degree + 1)]
    NotAComplex { degree: usize },

    #[error("incidence precondition violated: {0}")]
    Incidence(String),

    #[error("invalid sign vector: {0}")]
    Signs(String),

    #[error("rank mismatch: expected {expected}, got {actual}")]
    RankMismatch { expected: usize, actual: usize },

    #[error("invalid integration parameters: {0}")]
    Integration(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
