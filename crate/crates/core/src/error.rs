use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("indeterminate form: {0}")]
    Indeterminate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid rational {0:?}")]
    ParseRational(String),
    #[error("interval ({0}, {1}] is empty or reversed")]
    EmptyInterval(String, String),
    #[error("interval ({0}, {1}] lies outside the ambient (0, {2}]")]
    OutsideAmbient(String, String, String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("complement requires a bounded ambient")]
    UnboundedComplement,
    #[error("invalid step density: {0}")]
    InvalidDensity(String),
    #[error("value {value} outside the allowed range {range}")]
    OutOfRange { value: String, range: String },
    #[error("element parameters do not match the lattice: {0}")]
    Mismatch(String),
    #[error("size cap exceeded: {what} (limit {limit})")]
    SizeCap { what: String, limit: usize },
    #[error("{k} does not divide {n}")]
    NotDivisible { k: u32, n: u32 },
    #[error("lattice already has a {0}")]
    AlreadyBounded(&'static str),
    #[error("not an antichain cutset: {0}")]
    InvalidCutset(String),
    #[error("internal verification failed: {0}")]
    Internal(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
