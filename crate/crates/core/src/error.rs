use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars live in incompatible field towers")]
    TowerMismatch,
    #[error("zero has no multiplicative order")]
    ZeroInput,
    #[error("primitive {0}-th roots of unity are not constructible by square roots")]
    UnsupportedRootOfUnity(u64),
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("no root of the defining polynomial can be expressed exactly")]
    RootNotComputable,
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("defining polynomial is not reflective")]
    NotReflective,
    #[error("theta requires a nonzero parameter")]
    ZeroBeta,
    #[error("automorphism is not filtered")]
    NotFiltered,
    #[error("filtered automorphism matches no canonical form: {0}")]
    NonCanonical(String),
    #[error("images do not define an endomorphism: {0}")]
    NotAnEndomorphism(String),
    #[error("operation requires deg a >= 3, got {0}")]
    DegreeTooSmall(usize),
    #[error("operation requires deg a = {expected}, got {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("the Weyl-algebra diagonalization requires a = z")]
    NotWeyl,
    #[error("automorphism has infinite order")]
    InfiniteOrder,
    #[error("eigen-decomposition degenerates: {0}")]
    DegenerateSplit(String),
    #[error("group order must be at least 2, got {0}")]
    BadOrder(i64),
    #[error("automorphism does not generate a finite nontrivial cyclic group")]
    NotCyclicCase,
    #[error("polynomial is not symmetric under z -> 1 + rho - z")]
    NotSymmetric,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("the generated set is not closed under composition")]
    GroupNotClosed,
    #[error("automorphism is not eligible for a pertinency certificate: {0}")]
    NotEligible(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("certificate does not replay: {0}")]
    CertificateMismatch(String),
    #[error("parse error at {start}..{end}: {message}")]
    Parse {
        start: usize,
        end: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(start: usize, end: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            start,
            end,
            message: message.into(),
        }
    }
}
