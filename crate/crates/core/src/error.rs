use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error("root finding needs a polynomial of degree at least 1")]
    ConstantPolynomial,
    #[error("evaluation at a pole")]
    PoleEvaluation,
    #[error("signal has non-negligible imaginary part {imag:e} at t = {t}; conjugate pairing is broken")]
    ImaginaryResidue { t: f64, imag: f64 },
    #[error("signal must be non-negative time, got t = {0}")]
    NegativeTime(f64),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("improper transform (numerator degree {num} > denominator degree {den}): a singular term leaked into the regular part")]
    ImproperTransform { num: usize, den: usize },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("step size violation: {0}")]
    StepSize(String),
    #[error("integration diverged at t = {t}")]
    Divergence { t: f64 },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
