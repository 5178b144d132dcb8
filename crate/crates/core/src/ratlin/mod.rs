//! Exact rational scalars and dense matrices.
//!
//! Carrier arithmetic for the whole crate: every identity downstream is
//! checked with zero tolerance, so nothing here ever rounds.

mod mat;
mod rat;

pub use mat::{block_ldu, solve, LinearSolution, Mat};
pub use rat::{rat, Rat};
