//! Exact arithmetic for trivial, finitely generated abelian and free groups.

pub mod descriptor;
pub mod free;
pub mod hom;
pub mod intertwiner;
pub mod lattice;
pub mod matrix;
pub mod mixed;
pub mod smith;

pub use descriptor::{GroupDescriptor, GroupElement};
pub use hom::Homomorphism;
pub use intertwiner::solve_intertwiners;
pub use matrix::{Int, IntMatrix};
pub use mixed::{mixed_quotient_structure, ClosedForm, Factor, GroupPresentation, MixedQuotientStructure};
pub use smith::{smith_normal_form, Smith};
