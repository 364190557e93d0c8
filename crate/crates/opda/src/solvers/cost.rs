use crate::objectives::Objective;

/// Deterministic work accounting shared by all runners.
///
/// `passes` counts gradient-equivalent sweeps over the dataset: a full
/// gradient is one pass, a minibatch gradient is `batch / N`, and a
/// Hessian-sketch product with `r` columns is `batch * r / N`.
///
/// `flops` models arithmetic cost (4 flops per stored matrix entry
/// touched, plus dense vector work), and converts to modeled
/// milliseconds at 1e6 flop/ms. Using modeled rather than measured time
/// keeps trace files bit-reproducible.
#[derive(Debug, Clone)]
pub(crate) struct WorkMeter {
    n: f64,
    dim: f64,
    avg_nnz: f64,
    passes: f64,
    flops: f64,
}

impl WorkMeter {
    pub fn new(obj: &Objective) -> Self {
        Self {
            n: obj.n_samples() as f64,
            dim: obj.dim() as f64,
            avg_nnz: obj.avg_row_nnz(),
            passes: 0.0,
            flops: 0.0,
        }
    }

    pub fn passes(&self) -> f64 {
        self.passes
    }

    pub fn wall_ms(&self) -> f64 {
        self.flops / 1e6
    }

    pub fn count_full_grad(&mut self) {
        self.passes += 1.0;
        self.flops += self.n * 4.0 * self.avg_nnz + 2.0 * self.dim;
    }

    pub fn count_minibatch_grad(&mut self, batch: usize) {
        self.passes += batch as f64 / self.n;
        self.flops += batch as f64 * 4.0 * self.avg_nnz + 2.0 * self.dim;
    }

    pub fn count_hvp(&mut self, batch: usize, cols: usize) {
        self.passes += batch as f64 * cols as f64 / self.n;
        self.flops += cols as f64 * (batch as f64 * 4.0 * self.avg_nnz + 2.0 * self.dim);
    }

    /// Dense element-wise pipeline work, in multiples of the dimension.
    pub fn count_vector_ops(&mut self, ops: usize) {
        self.flops += ops as f64 * self.dim;
    }

    pub fn count_lbfgs_apply(&mut self, pairs: usize) {
        self.flops += (4 * pairs + 2) as f64 * self.dim;
    }

    pub fn count_block_apply(&mut self, triples: usize, rank: usize) {
        self.flops += triples as f64 * (4.0 * self.dim + 2.0 * rank as f64) * rank as f64;
    }

    /// Factorization and inversion work of one block refresh, beyond
    /// the Hessian products counted separately.
    pub fn count_block_factor(&mut self, rank: usize) {
        let r = rank as f64;
        self.flops += 2.0 * self.dim * r * r + r * r * r;
    }
}
