//! Exact-arithmetic toolkit for flat |1|-graded geometries.
//!
//! Everything is computed over arbitrary-precision rationals so that the
//! algebraic identities of the subject (involutivity, multiplication laws of
//! symmetry systems, gauge cocycles, normality of curvature) are checked
//! with zero tolerance.
//!
//! The crate is organized around the pipeline:
//!
//! * [`ratlin`] - exact rational scalars, dense matrices, solvers and the
//!   block LDU factorization;
//! * [`graded`] - graded matrix Lie algebras (`sl(m+1)`, `so(p+1, q+1)`)
//!   with brackets, projections and the cochain calculus;
//! * [`flatmodel`] - the homogeneous model spaces, group actions, big-cell
//!   factorization and exact chart differentials;
//! * [`symmetries`] - enumeration, transport and verification of point
//!   symmetries, systems of them, multiplication-law checks and the
//!   tangent-doubling Jacobian;
//! * [`weyl`] - displacement functions relative to the flat gauge, the
//!   candidate invariant gauge and its invariance cocycle;
//! * [`nonhomog`] - the punctured projective model whose automorphism group
//!   is not transitive although every point carries a symmetry.

mod dual;

pub mod error;
pub mod fixtures;
pub mod flatmodel;
pub mod graded;
pub mod model;
pub mod nonhomog;
pub mod ratlin;
pub mod sample;
pub mod symmetries;
pub mod weyl;

pub use error::{Error, Result};
pub use model::ModelTag;
