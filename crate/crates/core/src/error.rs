use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("cube does not intersect the grid domain")]
    EmptyIntersection,

    #[error("grid functions live on different grids")]
    IncompatibleGrids,

    #[error("invalid level range: k_min = {k_min} > k_max = {k_max}")]
    InvalidRange { k_min: i32, k_max: i32 },

    #[error("root cubes at level {level} have average {average} above the height; use root level {needed}")]
    RootTooSmall { level: i32, average: f64, needed: i32 },

    #[error("decomposition cubes are not unions of whole grid cells")]
    NotCellAligned,

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported Young function: {0}")]
    UnsupportedYoung(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty dictionary")]
    EmptyDictionary,

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
