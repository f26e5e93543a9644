use thiserror::Error;

use crate::term::Position;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("position {0} is not a position of the term")]
    PositionOutOfRange(Position),
    #[error("positions are 1-based; found a zero step")]
    ZeroStep,
    #[error("a context needs exactly one hole, found {0}")]
    HoleCount(usize),
    #[error("symbol {0}/{1} is not in the signature")]
    UnknownSymbol(String, usize),
    #[error("a signature needs at least one constant")]
    NoConstants,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CeError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("not well-founded: {0}")]
    NotWellFounded(String),
    #[error("not canonical: {0}")]
    NotCanonical(String),
    #[error("free fixpoint variable {0}")]
    FreeVariable(String),
    #[error("gate mentions x({0}) but no entry sits at {0}")]
    UnboundGateVariable(Position),
    #[error("disjunctive gate has {0} entries; at most {1} are supported")]
    GateTooWide(usize, usize),
    #[error("unification exceeded its budget of {0} steps")]
    BudgetExceeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("more than {0} terms of depth at most {1}")]
    TooManyTerms(usize, usize),
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
}
