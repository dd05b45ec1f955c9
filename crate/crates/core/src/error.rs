//! Crate-wide error type.

use crate::graph::Violation;
use crate::symbol::SymbolKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate declaration of {kind:?} symbol {label}/{arity}")]
    DuplicateSymbol { kind: SymbolKind, label: String, arity: u32 },

    #[error("symbol {label}/{arity} declared with conflicting argument order")]
    ConflictingArgOrder { label: String, arity: u32 },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("symbol {0} is not declared in the signature")]
    UnknownSymbol(String),

    #[error("graph is invalid: {}", Violation::join(.0))]
    InvalidGraph(Vec<Violation>),

    #[error("node depth {depth} exceeds the declared mask depth bound {max}")]
    MaskDepthExceeded { depth: u32, max: u32 },

    #[error("node {0} has no single depth or argument position; masks need tree-shaped non-leaf nodes")]
    AmbiguousMask(String),

    #[error("placeholder pool {pool} is exhausted ({size} symbols)")]
    PoolExhausted { pool: String, size: usize },

    #[error("no placeholder pool accepts {label}/{arity}")]
    NoPoolFor { label: String, arity: u32 },

    #[error("no constraint matches node {node} in parallel set {set}; the system was not built for this input")]
    MatchFailed { set: usize, node: String },

    #[error("vector length {got} does not match the system's {expected}")]
    VectorLength { expected: usize, got: usize },

    #[error("system digest mismatch: expected {expected}, found {got}")]
    DigestMismatch { expected: String, got: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("decode gave up: no graph consistent with the vector")]
    Unsat,

    #[error("decode exceeded its time budget")]
    Timeout,

    #[error("implication-cycle enumeration exceeded the cap of {cap} cycles")]
    CycleBudget { cap: usize },

    #[error("solver model assembles to an invalid graph: {}", Violation::join(.0))]
    InvalidModel(Vec<Violation>),

    #[error("model assembly failed: {0}")]
    ModelAssembly(String),

    #[error("satisfiability formula needs {variables} variables, over the cap of {max}")]
    FormulaTooLarge { variables: usize, max: usize },

    #[error("solver backend failed: {0}")]
    Solver(String),

    #[error("clause uses {found} distinct variables, more than the {max} placeholders")]
    TooManyVariables { found: usize, max: usize },

    #[error("sequence of {len} entries exceeds the declared maximum {max}")]
    SequenceTooLong { len: usize, max: usize },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for the failure modes a decode run reports as data rather than
    /// aborting a whole experiment.
    #[must_use]
    pub fn is_decode_failure(&self) -> bool {
        matches!(
            self,
            Error::Unsat
                | Error::Timeout
                | Error::CycleBudget { .. }
                | Error::InvalidModel(_)
                | Error::ModelAssembly(_)
                | Error::FormulaTooLarge { .. }
        )
    }
}
