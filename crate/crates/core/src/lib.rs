//! Numerical kernels for verifying lower bounds on the first nontrivial
//! Neumann eigenvalue `μ₁(Ω)` of the p-Laplacian.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! * [`geometry`]: symbolic planar domains and uniformly refined triangulations,
//! * [`fem`]: P1 stiffness/mass assembly and first-eigenpair solvers (p = 2),
//! * [`special`]: Bessel functions, the radial profile `Ψ_p` and its power means,
//! * [`rearrangement`]: exact decreasing rearrangement of P1 functions,
//!   Chiti-type comparison and reverse Hölder checks,
//! * [`sturm`]: the singular weighted Sturm–Liouville eigenvalue `σ₁(0, A)`,
//! * [`bounds`]: relative isoperimetric constants and every lower bound
//!   compared in the reports.
//!
//! IO, command-line handling and file formats live in the `spectral-bounds`
//! companion crate.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

// Float math goes through `num_traits::Float` (backed by libm). Whenever std
// ends up in the build graph (tests, feature unification) its inherent float
// methods take precedence, hence the `allow(unused_imports)` on those imports.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
mod error;
pub mod fem;
pub mod geometry;
pub mod quadrature;
pub mod rearrangement;
pub mod special;
pub mod sturm;

pub use error::{Error, Result};
