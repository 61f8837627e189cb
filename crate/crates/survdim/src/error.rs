use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("word {0} is not a Lyndon word with nonzero last digit")]
    NotLyndon(String),

    #[error("parameter {0} is not in the bifurcation set")]
    NotBifurcation(String),

    #[error("the coefficient series is identically zero; P(x) = 1 has no root")]
    ZeroSeries,

    #[error("tolerance must be positive, got {0}")]
    BadTolerance(String),

    #[error("precision cap of {cap} bits reached before the requested tolerance was met")]
    PrecisionCap { cap: u32 },

    #[error("tolerance unreachable: certified truncation tail {tail} exceeds the requested width")]
    ToleranceUnreachable { tail: String },

    #[error("enumeration budget exceeded after {visited} nodes (deepest completed depth {depth})")]
    BudgetExceeded { visited: u64, depth: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
