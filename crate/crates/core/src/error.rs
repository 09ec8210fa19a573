use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("too few variables: need at least {needed}, got {got}")]
    TooFewVariables { needed: usize, got: usize },
    #[error("partition {partition:?} does not sum to degree {degree}")]
    DegreeMismatch { partition: Vec<u32>, degree: u32 },
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("term of degree {term} exceeds homogenization degree {target}")]
    DegreeTooHigh { term: u32, target: u32 },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("degree must be even, got {0}")]
    OddDegree(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("derivative order {k} out of range for degree {n}")]
    DerivativeOutOfRange { n: usize, k: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("inexact division")]
    InexactDivision,
    #[error("polynomial vanishes identically")]
    Vanishing,
    #[error("matrix is not symmetric")]
    NotSymmetricMatrix,
    #[error("singular matrix")]
    Singular,
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHomogeneous => "not_homogeneous",
            Error::TooFewVariables { .. } => "too_few_variables",
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::NotSymmetric => "not_symmetric",
            Error::DegreeTooHigh { .. } => "degree_too_high",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::InvalidPartition(_) => "invalid_partition",
            Error::OddDegree(_) => "odd_degree",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::DerivativeOutOfRange { .. } => "derivative_out_of_range",
            Error::Degenerate(_) => "degenerate",
            Error::InexactDivision => "inexact_division",
            Error::Vanishing => "vanishing",
            Error::NotSymmetricMatrix => "not_symmetric_matrix",
            Error::Singular => "singular",
            Error::Consistency(_) => "consistency",
            Error::Parse(_) => "parse",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
