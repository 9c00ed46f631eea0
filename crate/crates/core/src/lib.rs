//! Exact-arithmetic homological algebra for finite-dimensional associative
//! algebras: Hochschild cohomology, the singular (Tate-)Hochschild cochain
//! complex built from noncommutative differential forms, the generalized
//! Tate-Hochschild complex, and the chain-level operations on them (cup,
//! circle products with negative insertions, Gerstenhaber bracket, braces,
//! star product, Connes' B, BV operators).
//!
//! All arithmetic is exact, over a prime field `F_p` or over `Q`.

pub mod algebra;
pub mod cohomology;

pub mod complexes;
pub mod linalg;
pub mod ops;

pub mod scalar;
pub mod tensor;
pub mod verify;


pub use algebra::{ADual, AlgebraPresentation, FrobeniusData, ValidationReport};
pub use cohomology::CohomologyReport;
pub use complexes::{Cochain, ComplexWindow, DElem, DStarWindow, SgLadder};
pub use scalar::{FieldSpec, Scalar};
pub use tensor::{SpaceKind, SparseMap, SparseVec, Word, WordBasis};

use serde::{Deserialize, Serialize};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar field mismatch")]
    FieldMismatch,
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("insertion index {0} out of range")]
    IndexOutOfRange(i64),
    #[error("feature disabled: {0}")]
    FeatureDisabled(String),
    #[error("degree {0} outside built window")]
    DegreeOutOfWindow(i64),
    #[error("missing Frobenius data (a trace functional is required here)")]
    MissingFrobeniusData,
    #[error("trace form is not symmetric")]
    NotSymmetric,
    #[error("degenerate pairing: gram matrix is singular")]
    DegeneratePairing,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("basis dimension {dim} exceeds configured cap {cap}")]
    ResourceLimit { dim: u128, cap: u64 },
    #[error("element is not a cocycle at degree {0}")]
    NotACocycle(i64),
    #[error("chain-map consistency failure at degree {0}")]
    NotAChainMapAtDegree(i64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Which way the Koszul sign falls when a tensor product of graded maps is
/// applied to a word. `SecondPastFirst` is the convention
/// `(f (x) g)(x (x) y) = (-1)^{|g| deg(x)} f(x) (x) g(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KoszulConvention {
    SecondPastFirst,
    FirstPastSecond,
}

/// The global sign in the dual-basis formula for the BV operator on cochains:
/// `Delta(f)(w) = sigma(m) * sum_l <B(e_l (x) w), f> e^l` for `f` of arity `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BvExponent {
    /// `sigma(m) = (-1)^(m-1)`
    ArityMinusOne,
    /// `sigma(m) = (-1)^m`
    Arity,
}

/// The two global sign switches of the library. Exactly one setting passes
/// the identity suites; it is frozen here and the alternative settings are
/// exercised (and expected to fail) by the sign-arbiter test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignConventions {
    pub koszul: KoszulConvention,
    pub bv_exponent: BvExponent,
}

impl Default for SignConventions {
    fn default() -> Self {
        // Frozen by the sign-arbiter suite: SecondPastFirst is the unique
        // Koszul setting under which theta commutes with delta, and
        // (-1)^(m-1) the unique Delta exponent under which the BV identity
        // holds on cohomology of the symmetric test algebras.
        SignConventions {
            koszul: KoszulConvention::SecondPastFirst,
            bv_exponent: BvExponent::ArityMinusOne,
        }
    }
}
