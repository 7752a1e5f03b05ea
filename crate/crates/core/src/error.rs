use thiserror::Error;

/// Errors produced anywhere in the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("word parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid curve system: {0}")]
    InvalidSystem(String),
    #[error("chain `{0}` is not registered")]
    UnknownChain(String),
    #[error("chain relation pattern for `{0}` not found in word")]
    PatternNotFound(String),
    #[error("malformed page graph: {0}")]
    MalformedGraph(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid catalog request: {0}")]
    Catalog(String),
    #[error("open book is not type-1: {0}")]
    NotType1(String),
    #[error("{0}")]
    UsesNonBlueCurve(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("invalid numeric configuration: {0}")]
    InvalidConfig(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
