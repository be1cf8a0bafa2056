//! Functions on a Lie group: matrix elements of finite-dimensional
//! representations, finite Lie-Taylor jets, and the analytic estimates built
//! from their Lie derivatives.

pub mod analytic;
pub mod cauchy;
pub mod coeff;
pub mod element;
pub mod rep;

pub use analytic::{entire_seminorm, lie_taylor_eval, majorant_coeffs, restriction_sides, EntireSeminorm};
pub use cauchy::{cauchy_check, complex_extension_eval, complex_extension_eval_split, CauchyConfig, CauchyReport};
pub use coeff::{coeff_eval, lie_derive_word, CoeffFn, CoeffFnJson, Jet, MatrixElementFunction};
pub use element::{expm, op_norm, GroupElementExpr};
pub use rep::{catalog_rep, MatrixRep, MatrixRepJson};
