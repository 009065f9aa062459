//! Dense fewnomial systems: support structure, bound formulas, Gale
//! dualization and certified counting of real solutions.

pub mod algebra;
pub mod bounds;
pub mod corpus;
pub mod counting;
pub mod gale;
pub mod lattice;
pub mod serde_util;
pub mod support;

pub use algebra::laurent::{ExponentVector, LaurentPolynomial};
pub use algebra::rational::Rational;
pub use algebra::roots::{IsolatedRoot, RootIsolation};
pub use algebra::univariate::UniPoly;
pub use algebra::AlgebraError;
pub use bounds::{BoundParams, BoundReport, EstimateAudit, FormulaId};
pub use counting::{CorrespondenceVerdict, CountError, CountOptions, CountReport, RegionSpec};
pub use gale::{DiagonalizedSystem, FewnomialSystem, GaleError, GaleSystem, Relation};
pub use lattice::{IntegerMatrix, LatticeError, LatticeIndex, Sublattice};
pub use support::{DenseDecomposition, SupportError, SupportSet};
