//! Exact arithmetic: rationals, Laurent polynomials, univariate polynomials,
//! real root isolation and resultants.

pub mod laurent;
pub mod rational;
pub mod resultant;
pub mod roots;
pub mod univariate;
pub mod zpoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("mismatched variable counts: {left} vs {right}")]
    MismatchedVars { left: usize, right: usize },
    #[error("exponent vector of length {found}, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("expected {expected} substitution images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("substitution image is the zero polynomial")]
    ZeroImage,
    #[error("negative power of a polynomial that is not a monomial")]
    NegativePowerOfNonMonomial,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has negative exponents")]
    NegativeExponents,
    #[error("expected polynomials in two variables")]
    NotBivariate,
    #[error("variable index {0} out of range")]
    VariableIndex(usize),
    #[error("input has degree zero in the eliminated variable")]
    DegreeZeroInEliminated,
    #[error("enclosure does not isolate a root of the defining polynomial")]
    NotIsolating,
    #[error("sign decision exceeded the refinement cap")]
    RefinementCap,
}
