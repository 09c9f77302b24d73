use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant onto a stable exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size guard exceeded: {what} (limit {limit}, got {got})")]
    SizeGuard {
        what: &'static str,
        limit: u64,
        got: u64,
    },

    #[error("outside zero-free region, gamma={gamma}, delta={delta}")]
    OutsideRegion { gamma: f64, delta: f64 },

    #[error("base value g(0) is zero; the triangular system is singular")]
    SingularBase,

    #[error("no admissible solution for delta={delta}, nu={nu}")]
    NoSolution { delta: f64, nu: usize },

    #[error("order cap {cap} reached before the error bound was met")]
    OrderCap { cap: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
