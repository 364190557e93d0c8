//! Orthant-wise passive descent (OPDA) optimizers for L1-regularized
//! empirical risk minimization, with proximal-gradient baselines.
//!
//! The crate is organized around six modules:
//!
//! * [`numcore`] — dense vectors, sparse row matrices, and a seedable,
//!   platform-stable random source.
//! * [`operators`] — the element-wise maps the solvers are built from:
//!   soft-thresholding, orthant alignment `pi`, pseudo-gradient `psi`,
//!   and the passive alignment `phi`.
//! * [`objectives`] — smooth losses (logistic regression, least squares,
//!   and a two-dimensional polynomial family) with full/minibatch
//!   gradients and matrix-free Hessian-vector products.
//! * [`directions`] — descent-direction engines: SVRG variance reduction,
//!   L-BFGS two-loop, and block L-BFGS with sketching.
//! * [`solvers`] — the OPDA drivers (first-order, quasi-Newton, and
//!   plain-stochastic variants), Proximal-SVRG / Proximal-SGD baselines,
//!   stationarity metrics, and trace instrumentation.
//! * [`io`] — LIBSVM parsing, flat run-config files, and CSV traces.
//!
//! All solver runs are deterministic: a fixed seed reproduces every trace
//! byte for byte.

pub mod directions;
mod error;
pub mod io;
pub mod numcore;
pub mod objectives;
pub mod operators;
pub mod solvers;
pub mod synth;

pub use error::{Error, Result};
