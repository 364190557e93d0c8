use crate::numcore::ParamVector;
use crate::objectives::Objective;
use crate::operators::{align_phi, align_pi, prox_l1, pseudo_grad, Threshold};
use crate::{Error, Result};

use super::config::SolverConfig;
use super::opda::History;

/// Default stopping tolerance of the suboptimality oracle.
pub const DEFAULT_FSTAR_TOL: f64 = 1e-13;

const ORACLE_ITERATION_CAP: usize = 200_000;

/// Penalized objective `P(x) = F(x) + lambda1 * ||x||_1`.
pub fn penalized_value(obj: &Objective, lambda1: f64, x: &ParamVector) -> Result<f64> {
    Ok(obj.value(x)? + lambda1 * x.norm_l1())
}

/// Gradient mapping of the passive-descent update at `x`, built from the
/// full gradient and the supplied inverse-Hessian model:
///
/// ```text
/// G(x) = [phi(x - eta * pbar, x, eta * lambda) - x] / eta,
/// pbar = pi(H grad F(x), psi(grad F(x), x, lambda)).
/// ```
///
/// Its norm measures stationarity; G vanishes exactly at fixed points of
/// the update.
pub fn gradient_mapping(
    obj: &Objective,
    cfg: &SolverConfig,
    x: &ParamVector,
    history: &History,
) -> Result<ParamVector> {
    let full = obj.grad_full(x)?;
    gradient_mapping_with(cfg, x, history, &full)
}

/// Same as [`gradient_mapping`] with the full gradient supplied by the
/// caller (the runners reuse the anchor gradient).
pub(crate) fn gradient_mapping_with(
    cfg: &SolverConfig,
    x: &ParamVector,
    history: &History,
    full_grad: &ParamVector,
) -> Result<ParamVector> {
    let diamond = pseudo_grad(full_grad, x, cfg.lambda1)?;
    let hg = history.apply(full_grad)?;
    let pbar = align_pi(&hg, &diamond)?;
    let shifted = x.add_scaled(-cfg.eta, &pbar)?;
    let aligned = align_phi(&shifted, x, Threshold::new(cfg.eta * cfg.lambda1)?)?;
    aligned.sub(x)?.scale(1.0 / cfg.eta)
}

/// Proximal-gradient mapping `(x - prox(x - eta * grad F(x), eta*l1)) /
/// eta`, the stationarity measure of the proximal baselines and of the
/// suboptimality oracle.
pub fn prox_gradient_mapping(
    obj: &Objective,
    lambda1: f64,
    eta: f64,
    x: &ParamVector,
) -> Result<ParamVector> {
    let full = obj.grad_full(x)?;
    prox_gradient_mapping_with(lambda1, eta, x, &full)
}

pub(crate) fn prox_gradient_mapping_with(
    lambda1: f64,
    eta: f64,
    x: &ParamVector,
    full_grad: &ParamVector,
) -> Result<ParamVector> {
    let step = prox_l1(
        &x.add_scaled(-eta, full_grad)?,
        Threshold::new(eta * lambda1)?,
    );
    x.sub(&step)?.scale(1.0 / eta)
}

/// Reference optimum oracle: full-batch proximal gradient iterated from
/// the origin until the proximal-gradient mapping norm falls to `tol`,
/// returning the penalized objective at the result.
///
/// Dataset objectives use the constant stepsize `1 / L` from the
/// smoothness estimate; the polynomial objective rebuilds a local `L`
/// from its two-by-two Hessian each iteration and backtracks on any
/// objective increase, which also covers its nonconvex instances.
pub fn solve_fstar(obj: &Objective, lambda1: f64, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Argument(format!(
            "oracle tolerance must be positive, got {tol}"
        )));
    }
    if !(lambda1.is_finite() && lambda1 >= 0.0) {
        return Err(Error::Argument(format!(
            "lambda1 must be nonnegative, got {lambda1}"
        )));
    }
    let fixed_eta = match obj {
        Objective::Poly2d { .. } => None,
        _ => {
            let est = obj.estimate_smoothness()?;
            Some(1.0 / est.l_upper.max(f64::MIN_POSITIVE))
        }
    };

    let mut x = ParamVector::zeros(obj.dim());
    let mut value = penalized_value(obj, lambda1, &x)?;
    for _ in 0..ORACLE_ITERATION_CAP {
        let grad = obj.grad_full(&x)?;
        let mut eta = match (fixed_eta, obj) {
            (Some(e), _) => e,
            (None, Objective::Poly2d { spec }) => {
                1.0 / spectral_norm_2x2(spec.hessian(x[0], x[1])).max(1e-8)
            }
            (None, _) => unreachable!("fixed stepsize covers dataset objectives"),
        };
        let mut next;
        let mut next_value;
        let mut backtracks = 0;
        loop {
            next = prox_l1(&x.add_scaled(-eta, &grad)?, Threshold::new(eta * lambda1)?);
            next_value = penalized_value(obj, lambda1, &next)?;
            if next_value <= value + 1e-12 || backtracks >= 60 {
                break;
            }
            eta *= 0.5;
            backtracks += 1;
        }
        let gm_norm = x.sub(&next)?.norm() / eta;
        x = next;
        value = next_value;
        if gm_norm <= tol {
            return Ok(value);
        }
    }
    Err(Error::Oracle(format!(
        "proximal gradient did not reach tolerance {tol} within {ORACLE_ITERATION_CAP} iterations"
    )))
}

/// Spectral norm of a row-major 2x2 symmetric matrix.
fn spectral_norm_2x2(h: [f64; 4]) -> f64 {
    let mean = 0.5 * (h[0] + h[3]);
    let spread = (0.25 * (h[0] - h[3]) * (h[0] - h[3]) + h[1] * h[1]).sqrt();
    (mean + spread).abs().max((mean - spread).abs())
}
