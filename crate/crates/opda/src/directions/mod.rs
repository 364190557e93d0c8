//! Descent-direction engines: SVRG variance-reduced gradients, L-BFGS
//! history with the two-loop recursion, and block L-BFGS with three
//! sketching strategies.

mod block;
mod lbfgs;
mod sketch;
mod svrg;

pub use block::{block_update, BlockHistory, BlockTriple};
pub use lbfgs::{LbfgsHistory, CURVATURE_FLOOR};
pub use sketch::{SketchKind, SketchStrategy};
pub use svrg::{svrg_direction, SvrgAnchor};

pub(crate) use svrg::combine as svrg_combine;
