use thiserror::Error;

/// Construction errors for graphs and instances.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex id {id} out of range (n = {n})")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("self-loop at vertex {v} rejected")]
    SelfLoop { v: usize },
    #[error("duplicate edge ({tail}, {head}) rejected")]
    DuplicateEdge { tail: usize, head: usize },
    #[error("edge index {index} out of range (m = {m})")]
    EdgeIndexOutOfRange { index: usize, m: usize },
    #[error("invalid {field}: {reason}")]
    InvalidField { field: String, reason: String },
}

impl GraphError {
    pub fn invalid(field: &str, reason: impl Into<String>) -> Self {
        GraphError::InvalidField {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

/// Errors raised while reading an instance document.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field \"{field}\": {message}")]
    Field { field: String, message: String },
    #[error("field \"{field}\" is required for kind \"{kind}\"")]
    MissingField { field: String, kind: String },
    #[error("field \"{field}\" is not allowed for kind \"{kind}\"")]
    UnexpectedField { field: String, kind: String },
    #[error("unknown instance kind \"{kind}\"")]
    UnknownKind { kind: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ParseError {
    pub fn field(field: &str, message: impl Into<String>) -> Self {
        ParseError::Field {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// Errors from the seeded instance generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible parameter combination: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors from the brute-force oracles. Oracles refuse rather than degrade:
/// a silent fallback inside the ground-truth path would poison every ratio
/// measurement downstream.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle refused: {reason}")]
    Refused { reason: String },
    #[error("oracle time cap of {cap_secs} s exceeded")]
    TimeCapExceeded { cap_secs: u64 },
}

/// Errors from solvers (exact and approximate).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors from the parameter-sweep driver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("no acceptance up to k = {k_cap}: instance infeasible or algorithm unsound")]
    Exhausted { k_cap: u64 },
    #[error("lifting is defined for minimization goals only")]
    MaximizationUnsupported,
    #[error("ratio function fails its shape requirements: {0}")]
    InvalidRho(String),
}

/// Errors from reduction constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("alphabet mismatch: set system has m = {m} but game alphabet size is {sigma}")]
    AlphabetMismatch { m: usize, sigma: usize },
    #[error("set-system construction failed after {attempts} attempts (m = {m}, l = {l}); raise the universe constant or retry cap")]
    ConstructionFailed { m: usize, l: usize, attempts: usize },
    #[error("parameter cap exceeded: {0}")]
    CapExceeded(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
