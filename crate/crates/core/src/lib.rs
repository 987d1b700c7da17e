//! Exact symbolic kernel for the variational bicomplex on jet coordinates.

pub mod check;
pub mod euler;
pub mod filtration;
pub mod forms;
pub mod frontend;
pub mod jet;
pub mod random;
pub mod scalar;

pub use jet::{JetSpace, JetVar, MultiIndex, Var};

/// The exact rational field every concrete alias below is built on.
pub type Rational = num_rational::BigRational;
/// An exact polynomial over the jet coordinates.
pub type Expr = jet::Polynomial<Rational>;
pub type Form = forms::Form<Rational>;
pub type Lagrangian = euler::Lagrangian<Rational>;
pub type SourceForm = euler::SourceForm<Rational>;
pub type GradedClass = filtration::GradedClass<Rational>;
pub type GammaDecomposition = filtration::GammaDecomposition<Rational>;
