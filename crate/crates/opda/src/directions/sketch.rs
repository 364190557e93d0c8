use std::collections::VecDeque;

use crate::numcore::{DenseMatrix, ParamVector, RandomSource};
use crate::{Error, Result};

/// How the block L-BFGS sketch matrix is produced each refresh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SketchKind {
    /// Standard basis columns chosen by a fixed rotation through the
    /// coordinates.
    IdentityCols,
    /// Independent standard-normal entries.
    Gaussian,
    /// Recent unaligned descent directions, orthonormalized.
    PrevDirections,
}

impl SketchKind {
    pub fn name(self) -> &'static str {
        match self {
            SketchKind::IdentityCols => "identity_cols",
            SketchKind::Gaussian => "gaussian",
            SketchKind::PrevDirections => "prev_directions",
        }
    }
}

/// Sketch generator. Carries the rotation offset for basis-column
/// sketches and the direction buffer for the previous-directions
/// strategy.
#[derive(Debug, Clone)]
pub struct SketchStrategy {
    kind: SketchKind,
    offset: usize,
    buffer: VecDeque<ParamVector>,
    capacity: usize,
}

impl SketchStrategy {
    pub fn new(kind: SketchKind, memory: usize) -> Self {
        Self {
            kind,
            offset: 0,
            buffer: VecDeque::new(),
            capacity: memory.max(1),
        }
    }

    pub fn kind(&self) -> SketchKind {
        self.kind
    }

    /// Remembers an unaligned direction for the previous-directions
    /// strategy; a no-op for the other kinds. Keeps at most `memory`
    /// vectors, oldest evicted first.
    pub fn record_direction(&mut self, d: &ParamVector) {
        if self.kind != SketchKind::PrevDirections {
            return;
        }
        if self.buffer.len() == self.capacity {
            self.buffer.pop_front();
        }
        self.buffer.push_back(d.clone());
    }

    /// Produces the next d-by-r sketch matrix.
    pub fn next(&mut self, d: usize, r: usize, rng: &mut RandomSource) -> Result<DenseMatrix> {
        if r == 0 || r > d {
            return Err(Error::Argument(format!(
                "sketch width must satisfy 1 <= r <= d, got r={r}, d={d}"
            )));
        }
        match self.kind {
            SketchKind::IdentityCols => {
                let mut m = DenseMatrix::zeros(d, r);
                for j in 0..r {
                    m.col_mut(j)[(self.offset + j) % d] = 1.0;
                }
                self.offset = (self.offset + r) % d;
                Ok(m)
            }
            SketchKind::Gaussian => rng.gaussian_matrix(d, r),
            SketchKind::PrevDirections => Ok(self.prev_directions_sketch(d, r)),
        }
    }

    /// Stacks the most recent buffered directions (newest first),
    /// orthonormalizes them by modified Gram-Schmidt, and pads with
    /// standard basis columns when fewer than `r` are buffered.
    ///
    /// A buffered direction that is linearly dependent on earlier
    /// columns degrades to a zero column, which makes the downstream
    /// Cholesky reject the whole update; padding candidates that are
    /// dependent are skipped instead, since any basis column may stand
    /// in for them.
    fn prev_directions_sketch(&self, d: usize, r: usize) -> DenseMatrix {
        const DEP_TOL: f64 = 1e-12;
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(r);
        for dir in self.buffer.iter().rev().take(r) {
            let mut c = dir.to_vec();
            project_out(&cols, &mut c);
            let norm = norm(&c);
            if norm > DEP_TOL * dir.norm().max(1.0) {
                for v in &mut c {
                    *v /= norm;
                }
            } else {
                c = vec![0.0; d];
            }
            cols.push(c);
        }
        let mut basis = 0;
        while cols.len() < r && basis < d {
            let mut c = vec![0.0; d];
            c[basis] = 1.0;
            basis += 1;
            project_out(&cols, &mut c);
            let nrm = norm(&c);
            if nrm > DEP_TOL {
                for v in &mut c {
                    *v /= nrm;
                }
                cols.push(c);
            }
        }
        while cols.len() < r {
            cols.push(vec![0.0; d]);
        }
        DenseMatrix::from_columns(&cols).expect("columns share length d")
    }
}

fn project_out(basis: &[Vec<f64>], c: &mut [f64]) {
    for b in basis {
        let proj: f64 = b.iter().zip(c.iter()).map(|(x, y)| x * y).sum();
        if proj != 0.0 {
            for (ci, bi) in c.iter_mut().zip(b) {
                *ci -= proj * bi;
            }
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
