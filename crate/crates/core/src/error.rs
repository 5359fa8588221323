use thiserror::Error;

/// Errors raised by the category kernel and the concrete categories.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("endpoint mismatch: codomain {cod} of the first map differs from domain {dom} of the second")]
    EndpointMismatch { cod: String, dom: String },
    #[error("composite {g} o {f} is missing from the composition table")]
    UndefinedComposite { g: String, f: String },
    #[error("unknown object or morphism `{0}`")]
    UnknownName(String),
    #[error("carrier of size {size} exceeds the configured bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("cocone does not commute over the span")]
    NonCommutingCocone,
    #[error("unsupported category: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Errors raised by the exhaustion engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExhaustError {
    #[error("element {0} is not in U of the object")]
    NotInU(String),
    #[error("oracle failure at step {step}: {reason}")]
    OracleFailure { step: usize, reason: String },
    #[error("insufficient chain: successor {index} does not realize {missing} type(s) over its predecessor")]
    InsufficientChain { index: usize, missing: usize },
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// Errors raised by the first-order toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("family is not closed under substructures: {0}")]
    ClosureViolation(String),
    #[error("search bound exceeded: {0}")]
    BoundExceeded(String),
}
