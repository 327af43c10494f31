//! Exact max-plus algebra for analysing the transient phase of matrix-power
//! sequences `A^{⊗k}` and linear systems `A^{⊗k} ⊗ v`.
//!
//! The crate computes exact transients by a bound-plus-scan oracle,
//! evaluates the known explicit transience bounds, and builds the Nachtigall
//! decomposition of `A^{⊗k}` into eventually periodic pieces. All arithmetic
//! is over exact rationals; `−∞` is a distinct variant of [`MaxPlus`].

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod nachtigall;
pub mod periodicity;
pub mod scalar;
pub mod spectral;
pub mod toolkit;

pub use error::{Error, Result};
pub use matrix::{MaxPlusMatrix, MaxPlusVector};
pub use scalar::{rat, ratio, scalar_ops, MaxPlus, Rational};
