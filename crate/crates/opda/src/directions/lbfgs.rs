use std::collections::VecDeque;

use crate::numcore::{dot, ParamVector};
use crate::{Error, Result};

/// Relative curvature floor: a pair is accepted only when
/// `s.y > CURVATURE_FLOOR * ||s|| * ||y||`.
pub const CURVATURE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone)]
struct CurvaturePair {
    s: ParamVector,
    y: ParamVector,
    rho: f64,
}

/// Bounded history of (s, y, rho) curvature pairs with two-loop
/// application of the implied inverse-Hessian approximation.
#[derive(Debug, Clone)]
pub struct LbfgsHistory {
    pairs: VecDeque<CurvaturePair>,
    capacity: usize,
}

impl LbfgsHistory {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::Argument("history capacity must be positive".into()));
        }
        Ok(Self {
            pairs: VecDeque::with_capacity(capacity),
            capacity,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Appends a curvature pair when it passes the relative curvature
    /// test, evicting the oldest pair beyond capacity. Returns whether
    /// the pair was accepted; rejection is a normal outcome.
    pub fn push(&mut self, s: ParamVector, y: ParamVector) -> Result<bool> {
        let sy = dot(&s, &y)?;
        if !(sy.is_finite() && sy > CURVATURE_FLOOR * s.norm() * y.norm()) {
            return Ok(false);
        }
        if self.pairs.len() == self.capacity {
            self.pairs.pop_front();
        }
        self.pairs.push_back(CurvaturePair {
            s,
            y,
            rho: 1.0 / sy,
        });
        Ok(true)
    }

    /// Two-loop recursion computing `H v`, with the initial matrix
    /// scaled by the most recent pair: `H0 = (s.y / ||y||^2) I`. An
    /// empty history applies the identity.
    pub fn apply(&self, v: &ParamVector) -> Result<ParamVector> {
        if self.pairs.is_empty() {
            return Ok(v.clone());
        }
        let mut q = v.to_vec();
        let mut alphas = vec![0.0; self.pairs.len()];
        for (j, pair) in self.pairs.iter().enumerate().rev() {
            let alpha = pair.rho * seq_dot(pair.s.as_slice(), &q);
            for (qi, yi) in q.iter_mut().zip(pair.y.iter()) {
                *qi -= alpha * yi;
            }
            alphas[j] = alpha;
        }
        let last = self.pairs.back().expect("nonempty");
        let gamma = 1.0 / (last.rho * seq_dot(last.y.as_slice(), last.y.as_slice()));
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
        for (j, pair) in self.pairs.iter().enumerate() {
            let beta = pair.rho * seq_dot(pair.y.as_slice(), &q);
            let c = alphas[j] - beta;
            for (qi, si) in q.iter_mut().zip(pair.s.iter()) {
                *qi += c * si;
            }
        }
        ParamVector::new(q)
    }
}

fn seq_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
