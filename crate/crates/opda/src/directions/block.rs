use std::collections::VecDeque;

use crate::numcore::{cholesky_inverse, cholesky_lower, DenseMatrix, ParamVector, RandomSource};
use crate::objectives::Objective;
use crate::{Error, Result};

use super::SketchStrategy;

/// One accepted block curvature triple: sketch, Hessian action, and the
/// inverse of their (symmetrized) inner product.
#[derive(Debug, Clone)]
pub struct BlockTriple {
    pub xi: DenseMatrix,
    pub y: DenseMatrix,
    pub delta: DenseMatrix,
}

/// Bounded history of block curvature triples with two-loop application
/// of the implied inverse-Hessian approximation.
#[derive(Debug, Clone)]
pub struct BlockHistory {
    triples: VecDeque<BlockTriple>,
    capacity: usize,
    rank: usize,
}

impl BlockHistory {
    pub fn new(capacity: usize, rank: usize) -> Result<Self> {
        if capacity == 0 || rank == 0 {
            return Err(Error::Argument(
                "block history needs positive capacity and rank".into(),
            ));
        }
        Ok(Self {
            triples: VecDeque::with_capacity(capacity),
            capacity,
            rank,
        })
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn triples(&self) -> impl Iterator<Item = &BlockTriple> {
        self.triples.iter()
    }

    fn push(&mut self, triple: BlockTriple) {
        if self.triples.len() == self.capacity {
            self.triples.pop_front();
        }
        self.triples.push_back(triple);
    }

    /// Two-loop application of the block recursion
    ///
    /// ```text
    /// H_j = Xi_j D_j Xi_j^T + (I - Xi_j D_j Y_j^T) H_{j-1} (I - Xi_j D_j Y_j^T)^T
    /// ```
    ///
    /// First pass (newest to oldest): `a_j = D_j Xi_j^T v'`, then
    /// `v' <- v' - Y_j a_j`. Base case applies the identity. Second pass
    /// (oldest to newest): `b_j = D_j Y_j^T v'`, then
    /// `v' <- v' + Xi_j (a_j - b_j)`.
    pub fn apply(&self, v: &ParamVector) -> Result<ParamVector> {
        if self.triples.is_empty() {
            return Ok(v.clone());
        }
        let mut vp = v.to_vec();
        let mut alphas: Vec<Vec<f64>> = vec![Vec::new(); self.triples.len()];
        for (j, triple) in self.triples.iter().enumerate().rev() {
            let a = triple.delta.apply(&triple.xi.transpose_apply(&vp)?)?;
            for (c, &ac) in a.iter().enumerate() {
                for (vi, yi) in vp.iter_mut().zip(triple.y.col(c)) {
                    *vi -= yi * ac;
                }
            }
            alphas[j] = a;
        }
        for (j, triple) in self.triples.iter().enumerate() {
            let b = triple.delta.apply(&triple.y.transpose_apply(&vp)?)?;
            for (c, (&ac, &bc)) in alphas[j].iter().zip(&b).enumerate() {
                let coeff = ac - bc;
                for (vi, xi) in vp.iter_mut().zip(triple.xi.col(c)) {
                    *vi += xi * coeff;
                }
            }
        }
        ParamVector::new(vp)
    }
}

/// Attempts one block curvature refresh at `x`: draws the next sketch,
/// computes the subsampled Hessian action on it, and stores the triple
/// if the sketch-Hessian inner product admits a Cholesky factorization.
/// Returns whether the update was accepted; a rejection leaves the
/// history unchanged and signals an indefinite or rank-deficient sketch.
pub fn block_update(
    obj: &Objective,
    x: &ParamVector,
    s: &[usize],
    sketch: &mut SketchStrategy,
    history: &mut BlockHistory,
    rng: &mut RandomSource,
) -> Result<bool> {
    let xi = sketch.next(obj.dim(), history.rank(), rng)?;
    let y = obj.hvp_minibatch(x, s, &xi)?;
    let gram = xi.transpose_mul(&y)?.symmetrized()?;
    let Some(l) = cholesky_lower(&gram) else {
        return Ok(false);
    };
    let delta = cholesky_inverse(&l);
    history.push(BlockTriple { xi, y, delta });
    Ok(true)
}
