use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("GF({p}^{e}) exceeds the supported order 2^16")]
    OrderTooLarge { p: u32, e: u32 },
    #[error("GF({q}) has no conjugation: the degree over the prime field is odd")]
    NoConjugation { q: u32 },
    #[error("the zero form defines no variety")]
    ZeroForm,
    #[error("dimension {n} is outside the supported range 0..=5")]
    DimensionOutOfRange { n: usize },
    #[error("expected a flat of dimension {expected}, got {actual}")]
    FlatDimension { expected: isize, actual: isize },
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("the input form is degenerate")]
    DegenerateForm,
    #[error("form could not be classified: {0}")]
    Unclassifiable(String),
    #[error("exhaustive enumeration of {size} items exceeds the cap {cap}")]
    ExhaustiveCap { size: f64, cap: f64 },
    #[error("degree {h} exceeds q = {q}")]
    DegreeAboveOrder { h: u32, q: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
