//! Graded representation theory of the polynomial vector-field Lie algebras
//! W(n), S(n) and H(2r), computed exactly at finite truncation.

pub mod algebra;
pub mod character;
pub mod error;
pub mod exact;
pub mod g0;
pub mod modules;
pub mod tilting;
pub mod weights;

pub use error::{Error, Result};
