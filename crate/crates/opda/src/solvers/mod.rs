//! Optimization drivers: OPDA in first-order, quasi-Newton, and
//! plain-stochastic variants, plus Proximal-SVRG and Proximal-SGD
//! baselines sharing the same epoch structure and trace schema.
//!
//! Every run is a pure function of its configuration (including the
//! seed): traces reproduce byte for byte. The `wall_ms` trace column is
//! modeled from deterministic operation counts rather than measured, so
//! that the reproducibility contract extends to the full trace file;
//! see the crate README.

mod baselines;
mod config;
mod cost;
mod opda;
mod oracle;
mod trace;

pub use baselines::{prox_sgd_run, prox_svrg_run};
pub use config::{AnchorChoice, BaselineMode, DirectionMode, SolverConfig};
pub use opda::{opda_run, opda_step, History, RunReport, SolverState, StepDetail};
pub use oracle::{
    gradient_mapping, penalized_value, prox_gradient_mapping, solve_fstar, DEFAULT_FSTAR_TOL,
};
pub use trace::TraceRecord;
