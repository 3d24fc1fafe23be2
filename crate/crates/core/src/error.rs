use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid edge {edge:?}: {reason}")]
    InvalidEdge { edge: Vec<u32>, reason: String },

    #[error("set {set:?} has size {got}, expected {expected}")]
    WrongSetSize {
        set: Vec<u32>,
        got: usize,
        expected: usize,
    },

    #[error("root {0:?} is not in the shadow of the graph")]
    RootNotInShadow(Vec<u32>),

    #[error("instance too large: {edges} edges exceeds the cap of {cap}")]
    InstanceTooLarge { edges: usize, cap: usize },

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("tree was truncated by a cap; survival is undefined")]
    TruncatedTree,

    #[error("enumeration of {size} assignments exceeds the guard of {guard}")]
    EnumerationGuard { size: u128, guard: u128 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
