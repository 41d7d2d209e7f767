use thiserror::Error;

/// Everything that can go wrong while building or checking orders, lattices,
/// congruences and the construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("cover list has a cycle through `{0}` and `{1}`")]
    CycleDetected(String, String),

    #[error("the order has no zero (no unique minimum)")]
    NoZero,

    #[error("the order has no unit (no unique maximum)")]
    NoOne,

    #[error("not a lattice: `{x}` {op} `{y}` is not unique (candidates: {candidates:?})")]
    NotALattice {
        x: String,
        y: String,
        op: &'static str,
        candidates: Vec<String>,
    },

    #[error("partition is not a congruence: {0}")]
    NotACongruence(String),

    #[error("congruence is not an I-congruence")]
    NotICongruence,

    #[error("not a down set: `{0}` is missing")]
    NotADownSet(String),

    #[error("template `{name}` is invalid: {check}")]
    TemplateInvalid { name: String, check: String },

    #[error("assembled K is not a lattice: {0}")]
    AssemblyNotALattice(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("correspondence broken: {0}")]
    CorrespondenceBroken(String),

    #[error("valuation did not stabilize within {0} layers")]
    ValuationDiverged(usize),

    #[error("verification failed at {stage}: {witness}")]
    VerificationFailed { stage: String, witness: String },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
