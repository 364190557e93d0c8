use crate::directions::{svrg_direction, SvrgAnchor};
use crate::numcore::ParamVector;
use crate::objectives::Objective;
use crate::operators::{prox_l1, Threshold};
use crate::{Error, Result};

use super::config::{AnchorChoice, BaselineMode, SolverConfig};
use super::cost::WorkMeter;
use super::opda::{divergence_guard, RunReport};
use super::oracle::{penalized_value, prox_gradient_mapping_with};
use super::trace::TraceRecord;

/// Proximal-SVRG: identical epoch and anchor structure to the OPDA
/// runner, with the inner update `x <- prox(x - eta * v, eta * lambda)`.
pub fn prox_svrg_run(obj: &Objective, cfg: &SolverConfig, x0: &ParamVector) -> Result<RunReport> {
    require_baseline(cfg, BaselineMode::ProxSvrg)?;
    cfg.validate(obj)?;
    check_dim(obj, x0)?;

    let mut meter = WorkMeter::new(obj);
    let mut rng = crate::numcore::RandomSource::new(cfg.seed);
    let mut x = x0.clone();
    let mut anchor = SvrgAnchor::new(obj, x0.clone(), 0)?;
    meter.count_full_grad();
    let guard = divergence_guard(penalized_value(obj, cfg.lambda1, x0)?);
    let threshold = Threshold::new(cfg.eta * cfg.lambda1)?;
    let mut trace = Vec::new();
    let mut step_index = 0usize;

    for t in 0..cfg.max_outer {
        let pick = match cfg.anchor_choice {
            AnchorChoice::Average => None,
            AnchorChoice::UniformRandom => Some(rng.uniform_index(cfg.m_inner)),
        };
        let mut sum = ParamVector::zeros(x.len());
        let mut picked = None;
        for i in 0..cfg.m_inner {
            step_index += 1;
            let s = rng.sample_minibatch(obj.n_samples(), cfg.batch)?;
            let stepped = svrg_direction(obj, &x, &anchor, &s)
                .and_then(|v| x.add_scaled(-cfg.eta, &v))
                .map(|shifted| prox_l1(&shifted, threshold));
            x = stepped.map_err(|e| divergence_from_nonfinite(e, step_index))?;
            meter.count_minibatch_grad(cfg.batch);
            meter.count_minibatch_grad(cfg.batch);
            meter.count_vector_ops(6);
            sum.accumulate(&x)?;
            if pick == Some(i) {
                picked = Some(x.clone());
            }
        }
        let tilde = match cfg.anchor_choice {
            AnchorChoice::Average => sum.scale(1.0 / cfg.m_inner as f64)?,
            AnchorChoice::UniformRandom => picked.expect("picked index < m_inner"),
        };
        anchor = SvrgAnchor::new(obj, tilde, t + 1)?;
        meter.count_full_grad();

        let objective = penalized_value(obj, cfg.lambda1, anchor.x_tilde())?;
        guard_objective(objective, guard, step_index, t)?;
        let gradmap_norm =
            prox_gradient_mapping_with(cfg.lambda1, cfg.eta, anchor.x_tilde(), anchor.full_grad())?
                .norm();
        trace.push(TraceRecord {
            outer: t + 1,
            data_passes: meter.passes(),
            wall_ms: meter.wall_ms(),
            objective,
            suboptimality: cfg.fstar.map(|f| objective - f),
            nnz: anchor.x_tilde().nnz(),
            gradmap_norm,
        });
        if gradmap_norm <= cfg.tol_gradmap {
            break;
        }
    }
    Ok(RunReport {
        x,
        trace,
        qn_attempts: 0,
        qn_rejected: 0,
    })
}

/// Proximal-SGD: `x <- prox(x - eta * grad f_S(x), eta * lambda)` with
/// no anchor maintenance. The per-epoch trace row evaluates the current
/// iterate; its full gradient is instrumentation and not charged to the
/// pass meter.
pub fn prox_sgd_run(obj: &Objective, cfg: &SolverConfig, x0: &ParamVector) -> Result<RunReport> {
    require_baseline(cfg, BaselineMode::ProxSgd)?;
    cfg.validate(obj)?;
    check_dim(obj, x0)?;

    let mut meter = WorkMeter::new(obj);
    let mut rng = crate::numcore::RandomSource::new(cfg.seed);
    let mut x = x0.clone();
    let guard = divergence_guard(penalized_value(obj, cfg.lambda1, x0)?);
    let threshold = Threshold::new(cfg.eta * cfg.lambda1)?;
    let mut trace = Vec::new();
    let mut step_index = 0usize;

    for t in 0..cfg.max_outer {
        for _ in 0..cfg.m_inner {
            step_index += 1;
            let s = rng.sample_minibatch(obj.n_samples(), cfg.batch)?;
            let stepped = obj
                .grad_minibatch(&x, &s)
                .and_then(|g| x.add_scaled(-cfg.eta, &g))
                .map(|shifted| prox_l1(&shifted, threshold));
            x = stepped.map_err(|e| divergence_from_nonfinite(e, step_index))?;
            meter.count_minibatch_grad(cfg.batch);
            meter.count_vector_ops(4);
        }
        let objective = penalized_value(obj, cfg.lambda1, &x)?;
        guard_objective(objective, guard, step_index, t)?;
        let full = obj.grad_full(&x)?;
        let gradmap_norm =
            prox_gradient_mapping_with(cfg.lambda1, cfg.eta, &x, &full)?.norm();
        trace.push(TraceRecord {
            outer: t + 1,
            data_passes: meter.passes(),
            wall_ms: meter.wall_ms(),
            objective,
            suboptimality: cfg.fstar.map(|f| objective - f),
            nnz: x.nnz(),
            gradmap_norm,
        });
        if gradmap_norm <= cfg.tol_gradmap {
            break;
        }
    }
    Ok(RunReport {
        x,
        trace,
        qn_attempts: 0,
        qn_rejected: 0,
    })
}

fn require_baseline(cfg: &SolverConfig, expected: BaselineMode) -> Result<()> {
    if cfg.baseline_mode != Some(expected) {
        return Err(Error::Config(format!(
            "this runner requires baseline_mode = {}",
            expected.name()
        )));
    }
    Ok(())
}

fn check_dim(obj: &Objective, x0: &ParamVector) -> Result<()> {
    if x0.len() != obj.dim() {
        return Err(Error::Dimension {
            expected: obj.dim(),
            got: x0.len(),
        });
    }
    Ok(())
}

fn guard_objective(objective: f64, guard: f64, step: usize, epoch: usize) -> Result<()> {
    if !objective.is_finite() || objective > guard {
        return Err(Error::Divergence {
            step,
            msg: format!(
                "objective {objective} breached the divergence guard in epoch {}",
                epoch + 1
            ),
        });
    }
    Ok(())
}

fn divergence_from_nonfinite(e: Error, step: usize) -> Error {
    match e {
        Error::NonFinite { context } => Error::Divergence {
            step,
            msg: format!("non-finite value in {context}"),
        },
        other => other,
    }
}
