use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// `(|alpha|)_n` vanishes for the requested degree.
    #[error("singular denominator: (|alpha|)_{degree} = 0 for |alpha| = {total}")]
    SingularDenominator { total: f64, degree: usize },

    #[error("lower parameter c = {c} is a pole (non-positive integer)")]
    Pole { c: Complex64 },

    /// The series did not reach the requested tolerance within the term budget.
    #[error("series truncation failed after {terms} terms: tail bound {bound:e} > tolerance (partial value {partial})")]
    Truncation {
        partial: Complex64,
        bound: f64,
        terms: usize,
    },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("lattice anchors differ; vectors live in different cosets")]
    AnchorMismatch,

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("internal consistency: {0}")]
    Consistency(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
