use thiserror::Error;

/// Failures of exact arithmetic: rationals, polynomials and number fields.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("operation on the zero polynomial")]
    ZeroPolynomial,
    #[error("elements belong to different number fields")]
    GeneratorMismatch,
    #[error("interval [{lo}, {hi}] does not isolate a single root of {poly}")]
    NotIsolating { poly: String, lo: String, hi: String },
    #[error("polynomial {0} is not irreducible over the rationals")]
    Reducible(String),
    #[error("factorization supports degree <= 4, got degree {0}")]
    DegreeTooLarge(usize),
    #[error("coefficient too large to factor: {0}")]
    CoefficientTooLarge(String),
    #[error("matrix has no real eigenvalue in (0, 1)")]
    NoEigenvalueInUnitInterval,
    #[error("matrix has {0} distinct real eigenvalues in (0, 1)")]
    AmbiguousEigenvalue(usize),
    #[error("matrix must be square and non-empty")]
    BadMatrix,
    #[error("integer overflow converting {0}")]
    Overflow(String),
}

/// Structural violations of interval identification systems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("interval [{0}, {1}] has non-positive length")]
    EmptyInterval(String, String),
    #[error("pair {0} joins intervals of different lengths")]
    UnequalLengths(String),
    #[error("pair {0} leaves the support interval")]
    OutsideSupport(String),
    #[error("duplicate pair label {0}")]
    DuplicateLabel(String),
    #[error("no pair labelled {0}")]
    UnknownLabel(String),
    #[error("parameter {0} must be positive")]
    NonPositiveParameter(&'static str),
    #[error("parameter u must be smaller than a + b")]
    ShiftTooLarge,
    #[error("point {0} lies outside the support")]
    PointOutsideSupport(String),
    #[error("system is not special symmetric of order 3: {0}")]
    NotSpecialForm(String),
    #[error("degenerate tie: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Errors raised by single steps of the induction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("interval {moved} is not contained in either interval of pair {along}")]
    NotContained { moved: String, along: String },
    #[error("no admissible transmission on the {0} side")]
    NoAdmissibleTransmission(&'static str),
    #[error("boundary point is covered by {0} intervals")]
    BoundaryCoveredTwice(usize),
    #[error("system has a hole")]
    Hole,
    #[error("degenerate tie: {0}")]
    Degenerate(String),
    #[error("replay diverged at step {index}: {reason}")]
    ReplayMismatch { index: usize, reason: String },
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Errors from the case classifier and the matrix route.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaseError {
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("critical point order {order} does not match the chain of case {case}")]
    ChainMismatch { case: u8, order: String },
    #[error("the case predicts a hole: {0}")]
    HoleExpected(String),
    #[error("no candidate matrix satisfies positivity and the normalization inequalities")]
    NoCandidate,
    #[error("{0} candidate matrices satisfy the normalization inequalities")]
    AmbiguousCandidates(usize),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
