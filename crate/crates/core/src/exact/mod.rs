//! Exact arithmetic over ℚ: rationals, exponent vectors, sparse vectors and
//! matrices, and echelon-form linear algebra.

mod echelon;
mod multi_index;
mod rational;
mod sparse;

pub use echelon::{echelon_factor, rank, span_contains, span_contains_dim, Echelon, Reduction};
pub use multi_index::{multi_binomial, MultiIndex};
pub use rational::{ParseRationalError, Rational};
pub use sparse::{SparseMatrix, SparseVec};
