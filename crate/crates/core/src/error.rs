use crate::digraph::{VertexId, VertexSet};
use thiserror::Error;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// A vertex whose degree into some part fell below the required bound.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DegreeViolation {
    pub vertex: VertexId,
    /// Index of the part (or `usize::MAX` for the whole universe).
    pub part: usize,
    pub degree: usize,
    pub required: f64,
}

impl std::fmt::Display for DegreeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertex {} has deg_pm {} into part {} (needs {:.3})",
            self.vertex, self.degree, self.part, self.required
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("sign pattern must be non-empty")]
    EmptyPattern,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("arc {0} -> {1} is not present")]
    ArcNotPresent(VertexId, VertexId),

    #[error("n = {n} exceeds the exact-mode limit {limit}")]
    TooLargeForExact { n: usize, limit: usize },

    #[error("n = {n} exceeds the oracle limit {limit}")]
    GraphTooLarge { n: usize, limit: usize },

    #[error("parts do not partition the vertex set: {0}")]
    NotAPartition(String),

    #[error("hypothesis violated: {reason}")]
    HypothesisViolated { reason: String, witness: Option<DegreeViolation> },

    #[error("retry budget exhausted after {attempts} attempts: {detail}")]
    BudgetExhausted {
        attempts: usize,
        detail: String,
        /// Best partition attempt seen (fewest violators), when the caller was a partitioner.
        best_attempt: Option<Box<Vec<VertexSet>>>,
        worst_violator: Option<DegreeViolation>,
    },

    #[error("Hall's condition fails: {} left vertices see only {} targets (need {})", witness.len(), neighborhood, required)]
    HallViolation { witness: Vec<VertexId>, neighborhood: usize, required: usize },

    #[error("expansion failed at level {level}: frontier {frontier}, threshold {threshold}")]
    ExpansionFailed { level: usize, frontier: usize, threshold: usize },

    #[error("no bridging arc between forward set ({forward}) and backward set ({backward})")]
    NoBridge { forward: usize, backward: usize },

    #[error("only {connected} of {wanted} pairs connected")]
    PartialResult { connected: usize, wanted: usize, indices: Vec<usize>, walks: Vec<crate::digraph::Walk> },

    #[error("vertex {0} is not the special vertex of any absorber")]
    NotAbsorbable(VertexId),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-friendly name of the variant, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidVertex { .. } => "InvalidVertex",
            Error::EmptyPattern => "EmptyPattern",
            Error::InvalidParam(_) => "InvalidParam",
            Error::ArcNotPresent(..) => "ArcNotPresent",
            Error::TooLargeForExact { .. } => "TooLargeForExact",
            Error::GraphTooLarge { .. } => "GraphTooLarge",
            Error::NotAPartition(_) => "NotAPartition",
            Error::HypothesisViolated { .. } => "HypothesisViolated",
            Error::BudgetExhausted { .. } => "BudgetExhausted",
            Error::HallViolation { .. } => "HallViolation",
            Error::ExpansionFailed { .. } => "ExpansionFailed",
            Error::NoBridge { .. } => "NoBridge",
            Error::PartialResult { .. } => "PartialResult",
            Error::NotAbsorbable(_) => "NotAbsorbable",
            Error::Parse { .. } => "Parse",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
