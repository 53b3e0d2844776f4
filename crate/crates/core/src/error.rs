use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },

    #[error("negative exponent outside Laurent context at byte {pos}")]
    NegativeExponent { pos: usize },

    #[error("variable index {index} out of range for {vars} variable(s)")]
    VariableOutOfRange { index: usize, vars: usize },

    #[error("dimension mismatch: expected {expected} variable(s), got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("arity mismatch: expected {expected} argument(s), got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("multiindex must be strictly increasing: {context}")]
    NonIncreasingMultiindex { context: String },

    #[error("operator carries no Wronskian norm metadata")]
    MissingNorm,

    #[error("bracket arity must be even here, got {arity}")]
    OddArity { arity: usize },

    #[error("tuple budget exceeded: {needed} tuple(s) required, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("operator is not closed on the given span: {context}")]
    NotClosed { context: String },

    #[error("certification failed: {context}")]
    CertificationFailed { context: String },

    #[error("truncation degree {given} too small to certify; need at least {needed}")]
    TruncationTooSmall { given: u32, needed: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
