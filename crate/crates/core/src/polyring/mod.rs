//! Exact sparse multivariate polynomials over the integers.
//!
//! Terms are kept in graded lexicographic order with respect to the order of
//! the variable registry, so equal polynomials have identical term maps and
//! identical printed forms.

mod mpoly;
mod parse;
mod residue;
mod split;
mod upoly;

pub use mpoly::{DegreeProfile, MPoly, Monomial, Registry};
pub use parse::parse_poly;
pub use residue::ResiduePoly;
pub use split::VarSplit;
pub use upoly::UPoly;
