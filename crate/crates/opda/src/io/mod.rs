//! External formats: LIBSVM datasets, flat `key = value` run
//! configuration files, and CSV convergence traces.

mod libsvm;
mod runconfig;
mod trace;

pub use libsvm::{normalize_rows, parse_libsvm, write_libsvm};
pub use runconfig::{build_objective, load_config, serialize_config, LossKind, RunConfig};
pub use trace::{format_g17, read_trace, write_trace, TRACE_HEADER};
