use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q = {0} is outside the admissible range [1e-6, 1]")]
    QOutOfRange(f64),

    #[error("operation requires q < 1 but q = 1 was supplied")]
    ClassicalNotAllowed,

    #[error("series exponential needs a zero constant term, got {0}")]
    NonzeroConstantTerm(num_complex::Complex64),

    #[error("series must be normalized (a0 = 0, a1 = 1)")]
    NotNormalized,

    #[error("series must have at least {0} coefficients")]
    OrderTooSmall(usize),

    #[error("hypergeometric denominator (c; q)_n vanishes at n = {0}")]
    DegenerateDenominator(usize),

    #[error("unknown catalog function `{0}`")]
    UnknownCatalogId(String),

    #[error("reference {0} has no coefficient bound")]
    UnsupportedReference(&'static str),

    #[error("reference not starlike at sample z = {0}")]
    ReferenceVanishes(num_complex::Complex64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("coefficient {index} has imaginary part {imag:e}; a real sequence is required")]
    ComplexCoefficients { index: usize, imag: f64 },

    #[error("even coefficient A_{0} is nonzero; an odd function is required")]
    NotOdd(usize),

    #[error("index {index} is out of range (need {min}..={max})")]
    IndexOutOfRange { index: usize, min: usize, max: usize },

    #[error("ratio-test window contains a non-positive term at n = {0}")]
    RadiusWindow(usize),

    #[error("malformed series document: {0}")]
    Format(String),
}
