//! Generalized probability on finite orthomodular lattices.
//!
//! * [`lattice`]: finite ortholattices, law checks and blocks.
//! * [`formats`]: `.oml` and `.gre` text formats and generators.
//! * [`states`]: exact probability states, the state polytope and the
//!   classical-versus-quantum defect functionals.
//! * [`hilbert`]: projections, density matrices, the Born rule and finite
//!   projection lattices.
//! * [`cox`]: associativity residuals and additive representations of
//!   combination functions.

pub mod cox;
pub mod formats;
pub mod hilbert;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod states;

pub use lattice::{Element, Law, LawReport, LatticeError, OrthoLattice};
pub use num_rational::BigRational as Rational;
