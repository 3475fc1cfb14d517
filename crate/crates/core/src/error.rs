use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("connected component with {vertices} vertices exceeds the canonicalization limit of {limit}")]
    SizeExceeded { vertices: usize, limit: usize },

    #[error("invalid multigraph: {0}")]
    InvalidGraph(String),

    #[error("operation requires a connected graph")]
    Disconnected,

    #[error("invalid subgraph selection: {0}")]
    InvalidSelection(String),

    #[error("leg count {legs} exceeds the enumeration cap of {cap}")]
    LegCapExceeded { legs: usize, cap: usize },

    #[error("order {order} outside the supported range {min}..={max}")]
    OrderCap { order: usize, min: usize, max: usize },

    #[error("estimated work {estimated:.3e} exceeds the budget {budget:.3e}")]
    BudgetExceeded { estimated: f64, budget: f64 },

    #[error("grid size {grid} too small for cutoff {cutoff}: need at least {required}")]
    GridTooSmall { grid: usize, cutoff: u32, required: usize },

    #[error("antipode recursion exceeded depth {0}")]
    RecursionDepth(usize),

    #[error("unbound symbol: {0}")]
    UnboundSymbol(String),

    #[error("Pade approximant [{numerator}/{denominator}] has a pole on the positive real axis at t = {location}")]
    SpuriousPole {
        numerator: usize,
        denominator: usize,
        location: f64,
    },

    #[error("Pade system is singular for degrees [{numerator}/{denominator}]")]
    SingularPade { numerator: usize, denominator: usize },

    #[error("quadrature did not converge: estimated error {error:.3e} after {intervals} intervals")]
    Quadrature { error: f64, intervals: usize },

    #[error("precision check failed: {0}")]
    Precision(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}
