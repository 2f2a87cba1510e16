use thiserror::Error;

/// Errors raised while reading or checking UTG documents.
#[derive(Debug, Error)]
pub enum ModelError {
    /// The JSON document could not be parsed. The message carries the
    /// line/column position reported by the parser.
    #[error("malformed UTG document: {0}")]
    Parse(#[from] serde_json::Error),
    /// The document parsed but the graph breaks structural invariants.
    #[error("graph failed validation: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("inconsistent fraud distribution: counts sum to {got}, expected {expected}")]
    DistributionMismatch { expected: u32, got: u32 },
    #[error("invalid app model: {0}")]
    InvalidModel(String),
    #[error("malformed app model document: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad config: {0}")]
    Config(String),
}

/// Errors raised by traffic-record classification.
#[derive(Debug, Error)]
pub enum TrafficError {
    #[error("record {id}: body_magic {magic:?} is not valid hex")]
    MalformedMagic { id: String, magic: String },
}
