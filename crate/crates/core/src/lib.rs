//! Exact Gutt and standard-ordered star products over finite-dimensional
//! real Lie algebras, with numeric tools for the group-function side.

pub mod algebra;
pub mod error;
pub mod group;
pub mod gutt;
pub mod parse;
pub mod pbw;
pub mod scalar;
pub mod std_star;
pub mod sym;

pub use algebra::{bracket, catalog, catalog_arc, validate_algebra, AlgebraElement, LieAlgebraSpec};
pub use error::{Error, Result};
pub use pbw::{normal_order, pbw_desymmetrize, pbw_multiply, pbw_symmetrize, Enveloping, PbwElement};
pub use scalar::{GaussianRational, HbarScalar, Rational};
pub use sym::{Monomial, SymTensor};
