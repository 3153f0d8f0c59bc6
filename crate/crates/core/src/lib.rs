//! Commutative-algebra engine for building subcanonical codimension-3/4
//! subschemes of projective space from Pfaffian, Gulliksen-Negard and
//! Kustin-Miller complexes over prime fields, and for computing the
//! Calabi-Yau invariants of the resulting 3-folds (Betti tables, Hilbert
//! polynomials, `c2.H`, `c3`, Picard-rank criterion, Hodge numbers).
//!
//! The crate is organized bottom-up:
//!
//! * [`ring`] - prime fields, grevlex monomials, sparse polynomials
//! * [`gb`] - reduced Groebner bases, normal forms, ideals, minors
//! * [`hilbert`] - Hilbert series/polynomials, dimension, degree, genus
//! * [`resolve`] - graded matrices, syzygies, minimal free resolutions,
//!   Betti tables, graded Ext and sheaf-cohomology dimensions
//! * [`complexes`] - Pfaffians and the Pfaffian / Gulliksen-Negard /
//!   Kustin-Miller complex builders over split bundles
//! * [`pipeline`] - seeded constructions, the coarse smoothness test,
//!   `c3`, the `rho = 1` criterion and end-to-end reproduction runs

pub mod error;
pub mod ring;

pub mod complexes;
pub mod gb;
pub mod hilbert;
pub mod io;
mod linalg;
pub mod pipeline;
pub mod resolve;

pub use error::{Error, Result};
