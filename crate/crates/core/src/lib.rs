//! Discrete invariants of stable b-symplectic manifolds.
//!
//! A manifold is described up to Morita equivalence by a discrete
//! presentation: a signed orbit graph whose vertices carry groups and whose
//! edges carry holonomy data and a modular period. This crate checks and
//! composes isomorphisms of such presentations, decides Morita equivalence
//! where the solver is complete, and computes Picard groups as explicit
//! products of real lines, circles and finitely generated abelian groups.

pub mod error;
pub mod format;
pub mod groups;
pub mod holonomy;
pub mod isotropy;
pub mod presentation;
pub mod rational;
pub mod samples;
pub mod skeleton;
pub mod verdict;

pub use error::{Error, Result};
pub use rational::Rational;
pub use verdict::Verdict;
