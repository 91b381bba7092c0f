use thiserror::Error;

/// Errors shared across the field, coding, verification, and simulation layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("interpolation nodes must be pairwise distinct")]
    DuplicateNode,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("block grid {grid_rows}x{grid_cols} does not divide matrix shape {rows}x{cols}")]
    IndivisibleDimensions {
        rows: usize,
        cols: usize,
        grid_rows: usize,
        grid_cols: usize,
    },
    #[error("field of size {modulus} is too small: {needed} distinct elements required")]
    InsufficientFieldSize { modulus: u64, needed: u64 },
    #[error("worker point {0} collides with a data node")]
    PointCollision(u64),
    #[error("not enough results: need {needed}, got {got}")]
    NotEnoughResults { needed: usize, got: usize },
    #[error("duplicate evaluation point {0} among used results")]
    DuplicatePoint(u64),
    #[error("systematic points are only available without security or privacy")]
    ModeForbidsSystematic,
    #[error("query domain has {got} elements but {needed} are required")]
    YTooSmall { needed: usize, got: usize },
    #[error("evaluation at {0} hits a pole of the normalized basis")]
    PoleAtNode(u64),
    #[error("library size must be at least 2 for full privacy")]
    MTooSmall,
    #[error("scheme carries no keys on the requested side")]
    NotSecureMode,
    #[error("enumeration would visit {states} states, above the cap of {cap}")]
    StateSpaceTooLarge { states: u128, cap: u128 },
    #[error("only {finite} workers can finish but {threshold} results are needed")]
    Incomplete { finite: usize, threshold: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("value {value} out of range for modulus {modulus}")]
    ValueOutOfRange { value: u64, modulus: u64 },
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
}

pub type Result<T> = std::result::Result<T, Error>;
