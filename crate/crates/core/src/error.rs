use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("K{n} has {expected} edges, got {found} colors")]
    WrongEdgeCount { n: usize, expected: usize, found: usize },
    #[error("color {0} is not in 1..=3")]
    InvalidColor(u8),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{what} supports at most {max} vertices, got {n}")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("level {level} outside {min}..={max}")]
    LevelOutOfRange { level: usize, min: usize, max: usize },
    #[error("pattern has {small} vertices but host has only {large}")]
    PatternTooLarge { small: usize, large: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("flags are over different types")]
    TypeMismatch,
    #[error("flag level {level} outside {min}..={max}")]
    LevelOutOfRange { level: usize, min: usize, max: usize },
    #[error("the first {k} vertices do not induce the type")]
    NotATypedGraph { k: usize },
    #[error("product would reach level {0}, above 5")]
    ProductTooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("coefficient {index} is negative")]
    NegativeCoefficient { index: usize },
    #[error("candidate {0} is not an admissible inequality (epsilon > 0 or malformed type)")]
    Inadmissible(String),
    #[error("unknown candidate key {0:?}")]
    UnknownCandidate(String),
    #[error("unknown interpretation {0:?}")]
    UnknownInterpretation(String),
    #[error("{coefficients} coefficients for {candidates} candidates")]
    LengthMismatch { coefficients: usize, candidates: usize },
    #[error("linear program is infeasible: no nonnegative combination certifies the target")]
    Infeasible,
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DominationError {
    #[error("dominating set must be nonempty")]
    EmptySet,
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("t = {t} must be at least 1 (n = {n})")]
    BadSetSize { t: usize, n: usize },
    #[error("n = {0} is not a positive multiple of 3")]
    NotMultipleOfThree(usize),
    #[error("{what} requires n in {min}..={max}, got {n}")]
    OutOfRange { what: &'static str, n: usize, min: usize, max: usize },
    #[error("counterexample found on {n} vertices: {witness}")]
    Counterexample { n: usize, witness: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("blow-up would have {0} vertices, limit is 5000")]
    Oversize(usize),
    #[error("blow-up factor must be at least 1")]
    ZeroFactor,
    #[error("base graph needs at least {0} vertices")]
    BaseTooSmall(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
