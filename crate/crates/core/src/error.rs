use std::fmt;

use thiserror::Error;

/// Fusion-ring axioms checked when a model is loaded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    NonEmpty,
    DistinctLabels,
    KnownLabels,
    Vacuum,
    VacuumNeutrality,
    UniqueDual,
    Commutativity,
    Associativity,
    DimensionConsistency,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::NonEmpty => "non-empty charge set",
            Axiom::DistinctLabels => "distinct charge labels",
            Axiom::KnownLabels => "fusion entries use declared charges",
            Axiom::Vacuum => "vacuum present",
            Axiom::VacuumNeutrality => "vacuum neutrality",
            Axiom::UniqueDual => "unique dual",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::DimensionConsistency => "quantum dimension consistency",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("axiom violated ({axiom}): {detail}")]
    Axiom { axiom: Axiom, detail: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unknown charge `{0}`")]
    UnknownCharge(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    Size {
        what: String,
        needed: String,
        cap: u64,
    },

    #[error("charge `{0}` is not primitive")]
    Primitivity(String),

    #[error("typical set carries no probability mass")]
    NoTypicalMass,

    #[error("sector mismatch: {0}")]
    SectorMismatch(String),

    #[error("states live in different anyon models")]
    ModelMismatch,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn axiom(axiom: Axiom, detail: impl Into<String>) -> Self {
        Error::Axiom {
            axiom,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
