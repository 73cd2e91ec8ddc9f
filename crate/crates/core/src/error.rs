use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: i64, rank: usize },

    #[error("invalid word literal: {0}")]
    WordSyntax(String),

    #[error("images do not form a basis of the free group")]
    NotABasis,

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid graph automorphism: {0}")]
    InvalidGraphAut(String),

    #[error("invalid edge path: {0}")]
    InvalidPath(String),

    #[error("enumeration exceeded cap of {0} elements")]
    EnumerationCap(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
