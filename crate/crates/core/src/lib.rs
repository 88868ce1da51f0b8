//! Ranges, asymptotic directions and zero sets of entire harmonic maps
//! `f = (u, v): ℂ → ℝ²`.

pub mod arcs;
pub mod catalog;
pub mod circle;
pub mod error;
pub mod expr;
pub mod io;
pub mod lewis;
pub mod range;
pub mod theorems;
pub mod verdict;
pub mod zero_sets;

pub use arcs::ArcSet;
pub use error::{Error, Result};
pub use expr::{Expr, HarmonicComponent, HarmonicMap, Part};
