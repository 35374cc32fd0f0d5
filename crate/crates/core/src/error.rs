use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivideByZero,
    #[error("element is not in the base subfield")]
    NotInSubfield,
    #[error("integer {0} does not encode an element of this field")]
    BadEncoding(u128),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices live in fields that are not on one tower branch")]
    IncompatibleFields,
    #[error("matrix does not have full column rank")]
    NotFullColumnRank,
    #[error("{cols} columns cannot be folded in blocks of {block}")]
    ColumnCountNotDivisible { cols: usize, block: usize },
    #[error("bad code dimensions: {0}")]
    BadDimensions(String),
    #[error("rank-metric decoding failed: {0}")]
    DecodeFailure(String),
    #[error("search space of {0} candidates is too large to enumerate")]
    SearchSpaceTooLarge(u128),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("rate region violated: {0}")]
    RateRegionViolation(String),
    #[error("transfer matrix D = [T1*G1 | T2] is singular")]
    SingularD,
    #[error("decoding X2 failed: {0}")]
    X2DecodeFailure(String),
    #[error("decoding X1 failed: {0}")]
    X1DecodeFailure(String),
    #[error("non-coherent stage 1 (X2) failed: {0}")]
    Stage1Failure(String),
    #[error("non-coherent stage 2 (X1) failed: {0}")]
    Stage2Failure(String),
    #[error("row-reduced form violates the lifted-code structure: {0}")]
    MalformedRre(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Short machine-readable label used in campaign tables and failure JSON.
    pub fn label(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::DivideByZero => "divide_by_zero",
            Error::NotInSubfield => "not_in_subfield",
            Error::BadEncoding(_) => "bad_encoding",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::IncompatibleFields => "incompatible_fields",
            Error::NotFullColumnRank => "t1_not_full_column_rank",
            Error::ColumnCountNotDivisible { .. } => "column_count_not_divisible",
            Error::BadDimensions(_) => "bad_dimensions",
            Error::DecodeFailure(_) => "decode_failure",
            Error::SearchSpaceTooLarge(_) => "search_space_too_large",
            Error::UnknownNode(_) => "unknown_node",
            Error::InvalidNetwork(_) => "invalid_network",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::RateRegionViolation(_) => "rate_region_violation",
            Error::SingularD => "singular_d",
            Error::X2DecodeFailure(_) => "decode_x2",
            Error::X1DecodeFailure(_) => "decode_x1",
            Error::Stage1Failure(_) => "stage1",
            Error::Stage2Failure(_) => "stage2",
            Error::MalformedRre(_) => "malformed_rre",
            Error::Config(_) => "config",
        }
    }

    /// True for the probabilistic failure events a campaign counts rather
    /// than aborts on.
    pub fn is_transfer_failure(&self) -> bool {
        matches!(
            self,
            Error::SingularD
                | Error::NotFullColumnRank
                | Error::X2DecodeFailure(_)
                | Error::X1DecodeFailure(_)
                | Error::Stage1Failure(_)
                | Error::Stage2Failure(_)
                | Error::MalformedRre(_)
        )
    }
}
