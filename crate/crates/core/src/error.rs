use alloc::boxed::Box;
use alloc::string::String;
use num_bigint::BigInt;

use crate::polyschinzel::SchinzelDiagnosis;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("polynomials live over different variable registries")]
    RegistryMismatch,
    #[error("invalid variable split: {0}")]
    InvalidSplit(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for a constant polynomial")]
    ConstantPolynomial,
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(BigInt),
    #[error("modulus {0} is not prime")]
    CompositeModulus(BigInt),
    #[error("modulus {0} exceeds the supported word size")]
    ModulusTooLarge(BigInt),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("polynomials are not coprime over the rationals (common factor {0})")]
    NotCoprime(String),
    #[error("fixed prime divisor {prime}: {context}")]
    FixedPrime { prime: BigInt, context: String },
    #[error("hypothesis {condition} fails: {detail}")]
    Hypothesis { condition: String, detail: String },
    #[error("refused: {0}")]
    Refused(Box<SchinzelDiagnosis>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by exhausting a search or exhaustion budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }

    pub(crate) fn budget(what: impl Into<String>) -> Self {
        Error::BudgetExceeded(what.into())
    }

    pub(crate) fn hypothesis(condition: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Hypothesis { condition: condition.into(), detail: detail.into() }
    }
}
