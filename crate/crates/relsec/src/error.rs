use thiserror::Error;

/// Errors produced by the analytical and simulation engines.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed-form path was requested but a shape parameter that must be
    /// a positive integer is not one.
    #[error("shape integrality: {0}; use the quadrature method for non-integer shapes")]
    ShapeIntegrality(String),

    /// A series/term enumeration would exceed the configured budget.
    #[error("term budget exceeded: {needed} terms needed, budget is {budget}; \
             increase pruning or reduce truncation depth")]
    BudgetExceeded { needed: u128, budget: u64 },

    /// An iterative numerical method failed to converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Configuration file or parameter validation failure.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
