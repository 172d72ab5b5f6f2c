//! Truncated standard, costandard and complex-term modules, maps between
//! them, and the composition-factor oracle.

mod complex;
mod fiber;
mod graded;
mod oracle;

pub use complex::{build_dk, verify_complex, ComplexReport, ComplexRow};
pub use fiber::{ExteriorPower, Fiber};
pub use graded::{
    build_complex_term, build_costandard, build_standard, shift_grading, GradedModule, ModuleKind,
};
pub use oracle::{
    canonical_map, composition_multiplicities, decompose_g0, hom_from_standard, image_character,
    simple_character, verify_module_axiom, Composition, ModuleMap,
};
