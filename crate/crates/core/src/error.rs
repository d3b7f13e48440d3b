use thiserror::Error;

use crate::parse::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("inverse requires a field")]
    InverseRequiresField,
    #[error("division by zero")]
    DivisionByZero,
    #[error("centraliser solver requires a field (got {0})")]
    SolverRequiresField(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("subset not invariant: morphism {0} crosses the subset boundary")]
    SubsetNotInvariant(String),
    #[error("input not commutative: {0} and {1} do not commute")]
    InputNotCommutative(usize, usize),
    #[error("groupoid mismatch: element has {got} coefficients, groupoid has {expected} morphisms")]
    GroupoidMismatch { expected: usize, got: usize },
    #[error("graph mismatch")]
    GraphMismatch,
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("malformed monomial: {0}")]
    MalformedMonomial(String),
    #[error("groupoid is infinite; bridge requires acyclic graph")]
    CyclicGraph,
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
