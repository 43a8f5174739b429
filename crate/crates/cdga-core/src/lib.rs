//! Exact-arithmetic engine for curved differential graded algebra.
//!
//! The crate is organized bottom-up: exact scalars and sparse matrices
//! ([`field`], [`linalg`]), degree-indexed spaces with the Koszul sign rule
//! ([`grading`]), curved DG-(co)algebras and their morphisms ([`cdg`]), the
//! four module species and their bifunctors ([`species`]), bar/cobar
//! constructions and twisting cochains ([`twist`]), cohomology and derived
//! functors of the first and second kind ([`derived`]), quadratic and
//! nonhomogeneous Koszul duality with acyclicity certificates ([`koszul`]),
//! and deterministic constructors for the worked examples ([`gallery`]).
//!
//! Everything is windowed and exact: computations reduce to linear algebra
//! over the rationals or a prime field, and every structural claim is backed
//! by a machine-checkable certificate (a d²-identity, a Maurer-Cartan
//! residual, a contracting homotopy, or a cohomology table).

#![no_std]
#![allow(clippy::too_many_arguments)]
#![allow(clippy::type_complexity)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cdg;
pub mod derived;
pub mod field;
pub mod gallery;
pub mod grading;
pub mod koszul;
pub mod linalg;
pub mod species;
pub mod twist;

pub use field::{Field, FieldElement, FieldError};
pub use grading::{Combo, DifferentialSpace, GradedMap, GradedSpace, Grading, Label};
pub use linalg::Matrix;
