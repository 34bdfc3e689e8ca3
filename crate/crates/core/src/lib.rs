#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! One-cut equilibrium measures of polynomially perturbed Gaussian unitary
//! ensembles, the torus map generating function `e_1`, and exact or
//! brute-force oracles for every formula involved.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod coefftables;
pub mod correlators;
pub mod endpoints;
pub mod error;
pub mod genfun;
pub mod hfunc;
pub mod measure;
pub mod oracle;
pub mod quadrature;

pub use error::{Error, Result};
