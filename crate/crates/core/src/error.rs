use thiserror::Error;

/// Errors raised by tower construction and the analysis operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("every quotient order must be at least 2, got {0}")]
    InvalidOrder(u64),
    #[error("prime must be an odd prime >= 3, got {0}")]
    InvalidPrime(u64),
    #[error("module dimension must be at least 1")]
    InvalidDimension,
    #[error("tower depth must be at least 1")]
    ZeroDepth,
    #[error("for a Vilenkin product the orders list must have one entry per level: {orders} orders vs depth {depth}")]
    OrdersDepthMismatch { orders: usize, depth: usize },
    #[error("group order overflows u64 at the requested depth")]
    SizeOverflow,
    #[error("element does not belong to this tower (coordinate count {got}, expected {expected})")]
    CoordinateMismatch { got: usize, expected: usize },
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error("level {level} out of range 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("function sample has {got} values, tower has {expected} points")]
    LengthMismatch { got: usize, expected: usize },
    #[error("exponent must be positive, got {0}")]
    InvalidExponent(f64),
    #[error("L^p exponent must satisfy p >= 1, got {0}")]
    InvalidLp(f64),
    #[error("{0}")]
    InvalidParameter(String),
    #[error("operation requires a {required} tower")]
    WrongFamily { required: &'static str },
    #[error("witness has depth {got}, expected depth exactly {expected}")]
    WitnessDepth { got: usize, expected: usize },
    #[error("fit window degenerate: {points} usable points, need at least {needed}")]
    DegenerateFitWindow { points: usize, needed: usize },
    #[error("indicator level m = {m} must be below the tower depth {depth}")]
    IndicatorLevel { m: usize, depth: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
