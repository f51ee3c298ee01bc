//! Oriented interval identification systems of order 3: exact arithmetic, the
//! Rauzy induction, the eight-case symmetric classification with its
//! transition matrices, and the self-similar thin example over `Q(λ)`.

pub mod arith;
pub mod cases;
pub mod engine;
pub mod error;
pub mod sampling;
pub mod system;
pub mod thin;

pub use arith::{ExactField, NumberField, NumberFieldElement, Rational};
pub use cases::{
    classify_case, predict_next, symmetrize, verify_theorem1, Branch, CaseCounts, CaseLabel, RouteVerdict,
    SymmetrizeOutcome, TheoremReport, TransitionMatrix,
};
pub use engine::{run_induction, InductionTrace, Outcome, Side, StepRecord, StopWhen};
pub use error::{ArithError, CaseError, EngineError, SystemError};
pub use system::{build_special_symmetric, IISystem, IdentificationPair, Interval, PairLabel, SymmetricParams};
pub use thin::{thin_eigen_params, thin_scan, verify_matrix_product, verify_self_similarity, ThinReport};
