use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report, from arithmetic up to the DSL.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid variable name `{0}`")]
    InvalidName(String),

    #[error("name `{0}` collides with an existing name")]
    NameCollision(String),

    #[error("intermediate polynomial of total degree {degree} exceeds the degree guard {guard}")]
    DegreeGuardExceeded { degree: u32, guard: u32 },

    #[error("arity mismatch: expected {expected} values, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("relation headers differ: ({left}) vs ({right})")]
    HeaderMismatch { left: String, right: String },

    #[error("ideal is not zero-dimensional (infinitely many points)")]
    NotZeroDimensional,

    #[error("expected a nonzero univariate polynomial")]
    NotUnivariate,

    #[error("variety has points outside the rationals")]
    IrrationalPoint,

    #[error("{candidates} candidate points exceed the cap of {cap}")]
    CandidateExplosion { candidates: u128, cap: u64 },

    #[error("basis residues are linearly dependent")]
    DependentBasis,

    #[error("basis has {found} elements but the quotient has dimension {expected}")]
    BasisSize { expected: usize, found: usize },

    #[error("ideal is not radical: {points} points but quotient dimension {dimension}")]
    NonRadical { points: usize, dimension: usize },

    #[error("`{0}` is not a monomial")]
    NotMonomial(String),

    #[error("invalid attribute partition: {0}")]
    PartitionInvalid(String),

    #[error("parse error at line {line}, column {column}: expected {expected}")]
    Parse { line: usize, column: usize, expected: String },

    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal error: {0}")]
    Internal(String),
}
