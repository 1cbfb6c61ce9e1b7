use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("expected signature (1, n-1, 0), got ({pos}, {neg}, {zero})")]
    Signature { pos: usize, neg: usize, zero: usize },
    #[error("class has non-positive self-intersection")]
    NotPositive,
    #[error("elements lie in different quadratic fields")]
    FieldMismatch,
    #[error("d = {0} does not define an imaginary quadratic field here")]
    RealField(i64),
    #[error("elements lie in different quaternion algebras")]
    AlgebraMismatch,
    #[error("value is not an integer where one is required: {0}")]
    NonIntegral(String),
    #[error(
        "alpha = {0} is a perfect square; the matrix representation needs sqrt(alpha) irrational"
    )]
    UnsupportedAlpha(i64),
    #[error("invalid surface data: {0}")]
    Spec(String),
    #[error("class is not ample: {0}")]
    Ample(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
