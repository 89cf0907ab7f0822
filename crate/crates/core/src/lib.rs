//! Learning dynamics of deep linear networks on structured semantic domains.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//! a small dense linear-algebra kernel, generators for the structured
//! environments (hierarchies, graph-structured Gaussian fields, planted
//! categories), closed-form and simulated learning trajectories, SVD-based
//! semantic analysis, and the fast-learning / similarity identities.
//! File formats, plotting and the command line live in the `semantica`
//! companion crate.
//!
//! Correlation convention used everywhere: for a dataset with `P` items,
//! inputs `X` (`N1 x P`) and features `Y` (`N3 x P`),
//!
//! * `Σ^yx = Y Xᵀ / P`
//! * `Σ^x  = X Xᵀ` (so one-hot inputs give `Σ^x = I`)
//! * `Σ^y  = (Σ^yx)ᵀ Σ^yx` (the `P x P` item similarity for one-hot inputs)
//!
//! Example `i` is presented to the network as the pair `(√P·x_i, y_i/√P)`,
//! whose second moments are exactly `Σ^x` and `Σ^yx`. With that scaling the
//! per-example backprop rule averages to the batch equations with
//! `τ = 1/(Pλ)`.

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod datagen;
pub mod dynamics;
mod error;
pub mod knowledge;
pub mod linalg;
pub mod rng;
pub mod semantics;

pub use error::{Error, Result};
pub use linalg::Matrix;
