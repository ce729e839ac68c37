use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("background is unsatisfiable")]
    UnsatisfiableBackground,
    #[error("{count} candidates exceed the enumeration cap of {cap}")]
    TooManyCandidates { count: usize, cap: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid world model: {0}")]
    InvalidModel(String),
    #[error("invalid belief base: {0}")]
    InvalidBase(String),
    #[error("conditioning on a set of probability zero")]
    ZeroProbabilityCondition,
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    InvalidEpsilon(String),
    #[error("benefit-to-cost ratio must be at least 1, got {0}")]
    InvalidStakes(String),
    #[error("invalid lottery: {0}")]
    InvalidLottery(String),
    #[error("order is not a permutation of the candidate labels: {0}")]
    NotAPermutation(String),
    #[error("statement `{statement}` has probability {probability}, below the acceptance threshold")]
    BelowThreshold { statement: String, probability: String },
    #[error("premises do not entail `{0}`")]
    NotEntailed(String),
    #[error("candidate `{0}` is unsatisfiable together with the background")]
    InconsistentCandidate(String),
    #[error("observation {observed} outside the sample space 0..={n}")]
    ObservationOutOfRange { observed: i64, n: u64 },
    #[error("the test did not reject its hypothesis; nothing can be accepted")]
    NotRejected,
    #[error("invalid test specification: {0}")]
    InvalidTest(String),
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
