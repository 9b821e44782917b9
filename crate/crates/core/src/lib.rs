//! Zorich maps and the dimension of their non-escaping sets.
//!
//! A Zorich map `F: R^d -> R^d` is the higher-dimensional analogue of the
//! complex exponential: on the beam `[-ρ, ρ]^{d-1} × R` it is
//! `e^{x_d} h(x_1, …, x_{d-1})` for a bi-Lipschitz parametrization `h` of the
//! upper unit hemisphere, and it is continued to all of `R^d` by reflections.
//! This crate evaluates `F` and the perturbed family `f_a = F - (0, …, 0, a)`,
//! inverts `f_a` on its tracts, and computes the two dimension bounds for the
//! set of non-escaping points: an upper bound from a lattice-sum covering
//! criterion and a lower bound from an iterated function system of inverse
//! branches and its Moran equation.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! thread-level parallelism live in the `zorich` crate.

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod branches;
pub mod dynamics;
mod error;
pub mod expmap;
pub mod geom;
pub mod lattice;
pub mod linalg;
mod point;
pub mod solve;
pub mod zorich;

pub use error::{Error, Result};
pub use point::Point;
