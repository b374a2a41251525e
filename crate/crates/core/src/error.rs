//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("not a numeral: {0}")]
    BadNumeral(String),
    #[error("cannot evaluate at this point: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arity error at {pos}: {name} takes {expected} argument(s), got {got}")]
    Arity {
        pos: usize,
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("iteration count must be at least 1 (at {pos})")]
    ZeroIteration { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("role mismatch for {expr}: {reason}")]
    RoleMismatch { expr: String, reason: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("{0:?} is not in B: nonempty words must end in 1")]
    NotInB(String),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("1^∞ is not the code of any cut: its lower segment would be all of B")]
    NoCut,
    #[error("{0} is not a dyadic rational in [0,1]")]
    NotDyadic(String),
    #[error("invalid cut: {0}")]
    InvalidCut(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("depth {depth} exceeds the configured maximum {max}")]
    DepthExceeded { depth: u32, max: u32 },
    #[error("gap ({lo}, {hi}) is not strictly ordered by power domination")]
    GapNotOrdered { lo: String, hi: String },
    #[error("midpoint {mid} is not strictly between {left} and {right}")]
    Betweenness {
        left: String,
        mid: String,
        right: String,
    },
    #[error("midpoint {mid} duplicates the growth class of {existing}")]
    Duplicate { mid: String, existing: String },
    #[error("side condition failed: {0}")]
    SideCondition(String),
    #[error("no entry at address {0}")]
    UnknownAddress(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Order(#[from] OrderError),
}
