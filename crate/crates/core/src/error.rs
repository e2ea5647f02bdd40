use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial degree {0} exceeds the supported cap of 16")]
    DegreeCapExceeded(usize),
    #[error("invalid defining polynomial: {0}")]
    InvalidModulus(String),
    #[error("polynomial is reducible over the rationals: {0}")]
    Reducible(String),
    #[error("{0} is not a prime element")]
    NotPrime(String),
    #[error("rational prime {0} is irregular for the equation order (Dedekind criterion fails)")]
    IrregularPrime(String),
    #[error("reduction undefined: element has negative valuation {0}")]
    UndefinedReduction(i64),
    #[error("valuation exceeds the cap of 64")]
    ValuationCap,
    #[error("unsupported field Q(sqrt(-{0})); expected d in {{1, 2, 3, 7, 11}}")]
    UnsupportedField(u32),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("recipe violation: {0}")]
    RecipeViolation(String),
    #[error("operator does not stabilise the {0} domain")]
    DomainNotStable(String),
    #[error("eigenspace decomposition incomplete: {0}")]
    UnsplitSpace(String),
    #[error("coefficient field has no suitable automorphism")]
    NoAutomorphism,
    #[error("reduction of a nonzero vector vanished")]
    ZeroReduction,
    #[error("leading coefficient vanishes")]
    DegenerateLeading,
    #[error("weight {0} is not an even integer in 0..=40")]
    InvalidWeight(u32),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
