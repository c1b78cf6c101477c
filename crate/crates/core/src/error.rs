use thiserror::Error;

/// Errors raised by network construction and the index computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative weight {weight} on record {from} -> {to}")]
    NegativeWeight { from: String, to: String, weight: f64 },

    #[error("non-finite weight on record {from} -> {to}")]
    NonFiniteWeight { from: String, to: String },

    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(String),

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("node index {0} is out of range")]
    NodeIndexOutOfRange(usize),

    #[error("attribute {attribute} is missing or not positive for node {node}")]
    MissingAttribute { attribute: String, node: String },

    #[error("threshold fraction {0} must lie in (0, 1]")]
    InvalidFraction(f64),

    #[error("node {0} has no outgoing loans")]
    NotALender(String),

    #[error("node {member} is not a direct borrower of {lender}")]
    NotADirectBorrower { lender: String, member: String },

    #[error("group of lender {0} is not critical")]
    NotCritical(String),

    #[error(
        "lender {lender} has {degree} direct borrowers, above the enumeration cap of {cap}; \
         raise the cap or use the simulation-based index"
    )]
    EnumerationCap { lender: String, degree: usize, cap: usize },

    #[error("initial default set of {size} nodes is above the attribution limit of {limit}")]
    InitialSetTooLarge { size: usize, limit: usize },

    #[error("node {0} does not default in this cascade")]
    NotDefaulted(String),

    #[error("initial default set must not be empty")]
    EmptyInitialSet,

    #[error("eigenvector iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("eigenvector centrality needs at least one edge")]
    NoEdges,

    #[error("damping factor {0} must lie in (0, 1)")]
    InvalidDamping(f64),

    #[error("invalid grade schema: {0}")]
    InvalidGradeSchema(String),

    #[error("threshold-rule score of a {steps}-step path overflows with {grades} grades and s = {limit}")]
    ScoreOverflow { steps: usize, grades: usize, limit: usize },

    #[error("invalid simulation plan: {0}")]
    InvalidPlan(String),

    #[error("rankings cover different node sets")]
    MismatchedRankings,

    #[error("every pair is tied; the coefficient is undefined")]
    AllPairsTied,

    #[error("at least two rankings are needed, got {0}")]
    TooFewRankings(usize),

    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: u64, message: String },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
