use crate::numcore::ParamVector;
use crate::objectives::Objective;
use crate::Result;

/// Reference point with its cached full gradient.
#[derive(Debug, Clone)]
pub struct SvrgAnchor {
    x_tilde: ParamVector,
    full_grad: ParamVector,
    epoch: usize,
}

impl SvrgAnchor {
    /// Caches `grad_full(obj, x_tilde)` eagerly so the stored gradient
    /// is always consistent with the stored point.
    pub fn new(obj: &Objective, x_tilde: ParamVector, epoch: usize) -> Result<Self> {
        let full_grad = obj.grad_full(&x_tilde)?;
        Ok(Self {
            x_tilde,
            full_grad,
            epoch,
        })
    }

    pub fn x_tilde(&self) -> &ParamVector {
        &self.x_tilde
    }

    pub fn full_grad(&self) -> &ParamVector {
        &self.full_grad
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }
}

/// Variance-reduced gradient: minibatch gradient at `x`, recentered by
/// the same minibatch evaluated at the anchor plus the anchor's full
/// gradient. Both minibatch terms use the identical index set.
pub fn svrg_direction(
    obj: &Objective,
    x: &ParamVector,
    anchor: &SvrgAnchor,
    s: &[usize],
) -> Result<ParamVector> {
    let g_x = obj.grad_minibatch(x, s)?;
    combine(&g_x, obj, anchor, s)
}

/// Shared tail of the SVRG formula, reusing an already-computed
/// minibatch gradient at `x`.
pub(crate) fn combine(
    g_x: &ParamVector,
    obj: &Objective,
    anchor: &SvrgAnchor,
    s: &[usize],
) -> Result<ParamVector> {
    let g_anchor = obj.grad_minibatch(anchor.x_tilde(), s)?;
    g_x.sub(&g_anchor)?.add_scaled(1.0, anchor.full_grad())
}
