/// One instrumentation row, emitted once per outer epoch at the freshly
/// chosen reference point.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// Outer epoch index, starting at 1.
    pub outer: usize,
    /// Cumulative gradient-equivalent sweeps over the dataset consumed
    /// by the algorithm itself (instrumentation is free).
    pub data_passes: f64,
    /// Cumulative modeled wall time in milliseconds, derived from
    /// deterministic operation counts (1e6 flop per ms).
    pub wall_ms: f64,
    /// Penalized objective P at the reference point.
    pub objective: f64,
    /// `objective - fstar` when a reference optimum is configured.
    pub suboptimality: Option<f64>,
    /// Number of exactly nonzero coordinates of the reference point.
    pub nnz: usize,
    /// Norm of the gradient mapping at the reference point.
    pub gradmap_norm: f64,
}
