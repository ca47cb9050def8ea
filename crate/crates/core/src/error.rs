use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid upper half-plane point ({x}, {y}): need finite x and y > 0")]
    InvalidPoint { x: f64, y: f64 },

    #[error("matrix is not in SL(2,R): determinant {det}")]
    NotUnimodular { det: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("genus must be an integer >= 2, got {0}")]
    InvalidGenus(u64),

    #[error("surface construction failed: {0}")]
    Construction(String),

    #[error("group element cap of {cap} exceeded (raise it with SYSTOLIC_ELEMENT_CAP)")]
    ElementCap { cap: usize },

    #[error("Dirichlet polygon did not close: {0}")]
    DomainNotClosed(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
