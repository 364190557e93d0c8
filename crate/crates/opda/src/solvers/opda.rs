use crate::directions::{
    block_update, svrg_combine, BlockHistory, LbfgsHistory, SketchStrategy, SvrgAnchor,
};
use crate::numcore::{ParamVector, RandomSource};
use crate::objectives::Objective;
use crate::operators::{align_phi, align_pi, pseudo_grad, Threshold};
use crate::{Error, Result};

use super::config::{AnchorChoice, DirectionMode, SolverConfig};
use super::cost::WorkMeter;
use super::oracle::{gradient_mapping_with, penalized_value};
use super::trace::TraceRecord;

/// Inverse-Hessian model attached to a solver run. `Identity` serves the
/// first-order and plain-stochastic modes.
#[derive(Debug, Clone)]
pub enum History {
    Identity,
    Lbfgs(LbfgsHistory),
    Block(BlockHistory),
}

impl History {
    /// Applies the current inverse-Hessian approximation.
    pub fn apply(&self, v: &ParamVector) -> Result<ParamVector> {
        match self {
            History::Identity => Ok(v.clone()),
            History::Lbfgs(h) => h.apply(v),
            History::Block(h) => h.apply(v),
        }
    }
}

/// Internals of the most recent inner step, kept for diagnostics: the
/// aligned direction `p`, the realized update `q = (x_prev - x_next) /
/// eta`, and both endpoints.
#[derive(Debug, Clone)]
pub struct StepDetail {
    pub x_before: ParamVector,
    pub direction: ParamVector,
    pub update: ParamVector,
    pub x_after: ParamVector,
}

/// Mutable state of one OPDA run.
#[derive(Debug, Clone)]
pub struct SolverState {
    x: ParamVector,
    anchor: SvrgAnchor,
    step_index: usize,
    history: History,
    sketch: SketchStrategy,
    rng: RandomSource,
    inner_sum: ParamVector,
    last_step: Option<StepDetail>,
    meter: WorkMeter,
    qn_attempts: usize,
    qn_rejected: usize,
}

impl SolverState {
    /// Builds the initial state: the first anchor is `x0` with its full
    /// gradient computed eagerly.
    pub fn init(obj: &Objective, cfg: &SolverConfig, x0: ParamVector) -> Result<Self> {
        cfg.validate(obj)?;
        if x0.len() != obj.dim() {
            return Err(Error::Dimension {
                expected: obj.dim(),
                got: x0.len(),
            });
        }
        let mut meter = WorkMeter::new(obj);
        let anchor = SvrgAnchor::new(obj, x0.clone(), 0)?;
        if cfg.direction_mode.uses_anchor() {
            meter.count_full_grad();
        }
        let history = match cfg.direction_mode {
            DirectionMode::Fm | DirectionMode::Sgd => History::Identity,
            DirectionMode::QnLbfgs => History::Lbfgs(LbfgsHistory::new(cfg.memory)?),
            DirectionMode::QnBlock => History::Block(BlockHistory::new(cfg.memory, cfg.rank)?),
        };
        let dim = x0.len();
        Ok(Self {
            x: x0,
            anchor,
            step_index: 0,
            history,
            sketch: SketchStrategy::new(cfg.sketch, cfg.memory),
            rng: RandomSource::new(cfg.seed),
            inner_sum: ParamVector::zeros(dim),
            last_step: None,
            meter,
            qn_attempts: 0,
            qn_rejected: 0,
        })
    }

    pub fn x(&self) -> &ParamVector {
        &self.x
    }

    pub fn anchor(&self) -> &SvrgAnchor {
        &self.anchor
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn last_step(&self) -> Option<&StepDetail> {
        self.last_step.as_ref()
    }

    fn begin_epoch(&mut self) {
        self.inner_sum = ParamVector::zeros(self.x.len());
    }

    fn set_anchor(&mut self, anchor: SvrgAnchor) {
        self.anchor = anchor;
    }
}

/// One inner iteration: sample a minibatch, form the pseudo-gradient
/// reference and the descent direction, align twice, and land the new
/// iterate. Refreshes the block curvature every `memory` steps.
pub fn opda_step(obj: &Objective, cfg: &SolverConfig, state: &mut SolverState) -> Result<()> {
    let produced_index = state.step_index + 1;
    let s = state
        .rng
        .sample_minibatch(obj.n_samples(), cfg.batch)?;

    let pipeline = (|| -> Result<(ParamVector, ParamVector, ParamVector)> {
        let g_mb = obj.grad_minibatch(&state.x, &s)?;
        let diamond = pseudo_grad(&g_mb, &state.x, cfg.lambda1)?;
        let v = match cfg.direction_mode {
            DirectionMode::Sgd => diamond.clone(),
            _ => svrg_combine(&g_mb, obj, &state.anchor, &s)?,
        };
        let d = state.history.apply(&v)?;
        if let History::Block(_) = state.history {
            state.sketch.record_direction(&d);
        }
        let p = align_pi(&d, &diamond)?;
        let x_minus = state.x.add_scaled(-cfg.eta, &p)?;
        let x_next = align_phi(&x_minus, &state.x, Threshold::new(cfg.eta * cfg.lambda1)?)?;
        let q = state.x.sub(&x_next)?.scale(1.0 / cfg.eta)?;
        Ok((p, q, x_next))
    })();

    let (p, q, x_next) = pipeline.map_err(|e| match e {
        Error::NonFinite { context } => Error::Divergence {
            step: produced_index,
            msg: format!("non-finite value in {context}"),
        },
        other => other,
    })?;

    match cfg.direction_mode {
        DirectionMode::Sgd => state.meter.count_minibatch_grad(cfg.batch),
        _ => {
            state.meter.count_minibatch_grad(cfg.batch);
            state.meter.count_minibatch_grad(cfg.batch);
        }
    }
    match &state.history {
        History::Lbfgs(h) => state.meter.count_lbfgs_apply(h.len()),
        History::Block(h) => state.meter.count_block_apply(h.len(), cfg.rank),
        History::Identity => {}
    }
    state.meter.count_vector_ops(10);

    state.last_step = Some(StepDetail {
        x_before: state.x.clone(),
        direction: p,
        update: q,
        x_after: x_next.clone(),
    });
    state.x = x_next;
    state.step_index = produced_index;
    state.inner_sum.accumulate(&state.x)?;

    if matches!(state.history, History::Block(_)) && state.step_index % cfg.memory == 0 {
        let History::Block(history) = &mut state.history else {
            unreachable!()
        };
        let accepted = block_update(obj, &state.x, &s, &mut state.sketch, history, &mut state.rng)?;
        state.qn_attempts += 1;
        if !accepted {
            state.qn_rejected += 1;
        }
        state.meter.count_hvp(cfg.batch, cfg.rank);
        state.meter.count_block_factor(cfg.rank);
    }
    Ok(())
}

/// Outcome of a full run: the final iterate, one trace row per epoch,
/// and quasi-Newton update bookkeeping (attempted and rejected
/// curvature updates).
#[derive(Debug, Clone)]
pub struct RunReport {
    pub x: ParamVector,
    pub trace: Vec<TraceRecord>,
    pub qn_attempts: usize,
    pub qn_rejected: usize,
}

impl RunReport {
    /// Fraction of curvature updates rejected; zero when none were
    /// attempted.
    pub fn rejection_rate(&self) -> f64 {
        if self.qn_attempts == 0 {
            0.0
        } else {
            self.qn_rejected as f64 / self.qn_attempts as f64
        }
    }
}

/// Runs OPDA for up to `max_outer` epochs of `m_inner` steps each,
/// refreshing the anchor per `anchor_choice`, harvesting L-BFGS
/// curvature from anchor movement, and emitting one trace row per
/// epoch. Stops early once the gradient-mapping norm falls to
/// `tol_gradmap`.
pub fn opda_run(obj: &Objective, cfg: &SolverConfig, x0: &ParamVector) -> Result<RunReport> {
    if cfg.baseline_mode.is_some() {
        return Err(Error::Config(
            "baseline_mode is set; use the baseline runners".into(),
        ));
    }
    let mut state = SolverState::init(obj, cfg, x0.clone())?;
    let p0 = penalized_value(obj, cfg.lambda1, x0)?;
    let guard = divergence_guard(p0);
    let mut trace = Vec::new();

    for t in 0..cfg.max_outer {
        let pick = match cfg.anchor_choice {
            AnchorChoice::Average => None,
            AnchorChoice::UniformRandom => {
                Some(state.rng.uniform_index(cfg.m_inner))
            }
        };
        state.begin_epoch();
        let mut picked = None;
        for i in 0..cfg.m_inner {
            opda_step(obj, cfg, &mut state)?;
            if pick == Some(i) {
                picked = Some(state.x.clone());
            }
        }
        let tilde = match cfg.anchor_choice {
            AnchorChoice::Average => {
                state.inner_sum.scale(1.0 / cfg.m_inner as f64)?
            }
            AnchorChoice::UniformRandom => picked.expect("picked index < m_inner"),
        };

        let previous = state.anchor.clone();
        let anchor = SvrgAnchor::new(obj, tilde, t + 1)?;
        if cfg.direction_mode.uses_anchor() {
            state.meter.count_full_grad();
        }
        if let History::Lbfgs(h) = &mut state.history {
            let s = anchor.x_tilde().sub(previous.x_tilde())?;
            let y = anchor.full_grad().sub(previous.full_grad())?;
            state.qn_attempts += 1;
            if !h.push(s, y)? {
                state.qn_rejected += 1;
            }
            state.meter.count_vector_ops(4);
        }

        let objective = penalized_value(obj, cfg.lambda1, anchor.x_tilde())?;
        if !objective.is_finite() || objective > guard {
            return Err(Error::Divergence {
                step: state.step_index,
                msg: format!("objective {objective} breached the divergence guard in epoch {}", t + 1),
            });
        }
        let gmap = gradient_mapping_with(cfg, anchor.x_tilde(), &state.history, anchor.full_grad())?;
        let gradmap_norm = gmap.norm();
        trace.push(TraceRecord {
            outer: t + 1,
            data_passes: state.meter.passes(),
            wall_ms: state.meter.wall_ms(),
            objective,
            suboptimality: cfg.fstar.map(|f| objective - f),
            nnz: anchor.x_tilde().nnz(),
            gradmap_norm,
        });
        state.set_anchor(anchor);
        if gradmap_norm <= cfg.tol_gradmap {
            break;
        }
    }
    Ok(RunReport {
        x: state.x,
        trace,
        qn_attempts: state.qn_attempts,
        qn_rejected: state.qn_rejected,
    })
}

/// Abort threshold on the penalized objective. The nominal rule is a
/// thousandfold increase over the start; the additive one keeps the
/// guard meaningful when the starting objective is tiny or negative.
pub(crate) fn divergence_guard(p0: f64) -> f64 {
    1e3 * (1.0 + p0.abs())
}
