//! Exact computations with the universal coacting bialgebra of a
//! finite-dimensional algebra: presentations, endomorphisms and
//! automorphisms over finite fields, and group gradings.

pub mod algebra;
pub mod endo;
pub mod error;
pub mod field;
pub mod gradings;
pub mod group;
pub mod io;
pub mod linalg;
pub mod ncpoly;
pub mod search;
pub mod universal;

pub use algebra::{is_algebra_map, AlgElem, FinAlgebra, Violation};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::{Matrix, Subspace};
pub use ncpoly::{complete, interreduce, GenId, Membership, NCPoly, RewriteSystem, ReductionOrder, Rule, TensorPoly, Word};
pub use group::FiniteGroup;
