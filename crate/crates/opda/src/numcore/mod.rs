//! Shared numeric primitives: dense parameter vectors, sparse row
//! matrices, small column-major dense matrices, and a deterministic
//! seedable random source.
//!
//! Every reduction in this module runs in a fixed sequential order so
//! that repeated runs produce bitwise-identical results.

mod matrix;
mod random;
mod sparse;
mod vector;

pub use matrix::{cholesky_lower, cholesky_inverse, DenseMatrix};
pub use random::{RandomSource, RNG_ALGORITHM};
pub use sparse::{sparse_dot, SparseDataset, SparseRow};
pub use vector::{dot, ParamVector};
