use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("relation is not reflexive: ({index},{index}) missing")]
    RelationNotReflexive { index: usize },
    #[error("relation is not transitive: ({i},{j}) and ({j},{k}) present but ({i},{k}) missing")]
    RelationNotTransitive { i: usize, j: usize, k: usize },
    #[error("index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operation requires a nonempty preorder")]
    EmptyPoset,
    #[error("operation requires a nonempty element set")]
    EmptySet,
    #[error("arity must be at least 2, got {n}")]
    BadArity { n: usize },
    #[error("construction needs {required} elements, above the cap of {cap}")]
    SizeOverflow { required: usize, cap: usize },
    #[error("requested {requested} exceeds the feasibility cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("factor {factor} has no largest element")]
    NoTopElement { factor: usize },
    #[error("set is not an antichain: elements {a} and {b} are compatible")]
    NotAnAntichain { a: usize, b: usize },
    #[error("map is not surjective: target element {missing} has no preimage")]
    NotSurjective { missing: usize },
    #[error("set {0:?} is not listed in the subset poset")]
    SetNotInFPoset(Vec<usize>),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("space has no nonempty open set")]
    NoNonemptyOpen,
    #[error("invalid finite space: {0}")]
    InvalidSpace(String),
    #[error("invalid query: {0}")]
    BadQuery(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
