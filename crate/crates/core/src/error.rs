use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit width {0} is outside 1..=63")]
    InvalidWidth(usize),

    #[error("bit index {index} is outside 1..={width}")]
    IndexOutOfRange { index: usize, width: usize },

    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("exact enumeration needs n <= {max}, got n = {n}")]
    ExactTooLarge { n: usize, max: usize },

    #[error("arity {n} exceeds the supported maximum {max}")]
    ArityTooLarge { n: usize, max: usize },

    #[error("at least one sample is required")]
    NoSamples,

    #[error("bits {indices:?} have zero expected influence; ratio undefined")]
    ZeroInfluence { indices: Vec<usize> },

    #[error("energy at bit {index} is {value}; energies must be finite and non-negative")]
    InvalidEnergy { index: usize, value: f64 },

    #[error("energy vector spends {spent} but the budget is {budget}")]
    OverBudget { spent: f64, budget: f64 },

    #[error("flip probability at bit {index} is {value}; must lie in [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("influence mean at bit {index} is {value}; must be finite and non-negative")]
    InvalidInfluence { index: usize, value: f64 },

    #[error("optimal total impact is zero; alpha is undefined")]
    ZeroOptimalImpact,

    #[error("beta must exceed 1, got {0}")]
    BetaNotAboveOne(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no training examples")]
    EmptyExamples,

    #[error("label {0} is not +1 or -1")]
    InvalidLabel(i8),

    #[error("output is not a permutation of the instance")]
    NotAPermutation,

    #[error("instance contains duplicate elements")]
    DuplicateElements,

    #[error("denominator estimate is zero; ratio undefined")]
    DegenerateDenominator,

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("truth table: {0}")]
    TruthTable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
