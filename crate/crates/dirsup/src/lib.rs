//! Numerical laboratory for suprema of random Dirichlet polynomials.
//!
//! The crate builds the polynomial family `sum eps_n d(n) n^{-sigma-it}`
//! over Rademacher signs, lifts it to a trigonometric polynomial on the
//! torus through prime-exponent vectors, and estimates suprema over the
//! line and the torus with certified-lower witnesses. A discrete-cube
//! restriction gives an exactly solvable lower-bound process, and the
//! `bounds` module collects the constant-free functionals the measurements
//! are compared against.
//!
//! All randomness is seed-derived and every parallel reduction runs in a
//! fixed order, so identical inputs give bit-identical outputs at any
//! worker count.

pub mod bounds;
pub mod cube;
pub mod dirichlet;
pub mod error;
pub mod numtheory;
pub mod supremum;
pub mod weights;

pub use error::{Error, Result};
