//! The graded Lie algebras W(n), S(n), H(2r) of polynomial vector fields.

mod checks;
mod context;
mod field;
mod slice;

pub use checks::{
    check_generation, closure_check, jacobi_check, semi_infinite_character, semi_infinite_check,
    triangular_parts, CheckReport, TriangularParts,
};
pub use context::{AlgebraContext, Family};
pub use field::{d_h, d_ij, Polynomial, Term, VectorField};
pub use slice::{graded_basis, Algebra, BasisLabel, ElemId, GradedSlice};
