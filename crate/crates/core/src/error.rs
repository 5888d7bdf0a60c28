use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("utility W[{row}][{col}] = {value} is negative or not finite")]
    InvalidUtility { row: usize, col: usize, value: f64 },

    #[error("expertise E[{row}][{col}] = {value} is outside [0, 1]")]
    InvalidExpertise { row: usize, col: usize, value: f64 },

    #[error("revenue of product {product} = {value} must be positive and finite")]
    InvalidRevenue { product: usize, value: f64 },

    #[error("W[{row}][{col}] = {weight} does not match E * rev = {expected}")]
    InconsistentDecomposition { row: usize, col: usize, weight: f64, expected: f64 },

    #[error("re-seller index {index} out of range (m = {m})")]
    ResellerOutOfRange { index: usize, m: usize },

    #[error("product index {index} out of range (n = {n})")]
    ProductOutOfRange { index: usize, n: usize },

    #[error("product {product} appears twice in the bundle of re-seller {reseller}")]
    DuplicateProduct { reseller: usize, product: usize },

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("row {0} of the utility matrix sums to zero and cannot be scaled")]
    ZeroSumRow(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown instance name `{0}`")]
    UnknownInstance(String),

    #[error("solution file: {0}")]
    Solution(String),

    #[error("allocation violates the bounds: {0}")]
    Infeasible(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
