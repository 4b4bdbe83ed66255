use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relations force {0} < {0}")]
    Cycle(usize),
    #[error("index {index} out of range for {n} elements")]
    Index { index: usize, n: usize },
    #[error("element {0} listed twice")]
    Duplicate(usize),
    #[error("digit {digit} out of range at rank {rank}")]
    Alphabet { rank: usize, digit: usize },
    #[error("elements {0} and {1} share a word")]
    DuplicateWord(usize, usize),
    #[error("word of element {element} has length {len}, below minimum {min}")]
    Length {
        element: usize,
        len: usize,
        min: usize,
    },
    #[error("order is not total")]
    NotTotal,
    #[error("order is not itov")]
    NotItov,
    #[error("order is not series-parallel; obstruction at {0:?}")]
    NotSeriesParallel(Vec<usize>),
    #[error("order is not a trunk")]
    NotTrunk,
    #[error("order is not a cedar")]
    NotCedar,
    #[error("order is not up-regular")]
    NotUpRegular,
    #[error("{n} elements exceeds the cap of {cap}")]
    Size { n: usize, cap: usize },
    #[error("bad parameter: {0}")]
    Param(String),
    #[error("bad label: {0}")]
    Label(String),
    #[error("element {0} has no leaf")]
    Coverage(usize),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("term is not compact: {0}")]
    NotCompact(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("decomposition clause {0} violated")]
    Clause(u8),
}

pub type Result<T> = std::result::Result<T, Error>;
