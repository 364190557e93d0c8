use crate::directions::SketchKind;
use crate::objectives::Objective;
use crate::{Error, Result};

/// Which descent direction an OPDA run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionMode {
    /// First-order: the variance-reduced gradient itself.
    Fm,
    /// Quasi-Newton via L-BFGS curvature pairs.
    QnLbfgs,
    /// Quasi-Newton via block L-BFGS curvature triples.
    QnBlock,
    /// Plain stochastic: the pseudo-gradient without variance reduction.
    Sgd,
}

impl DirectionMode {
    pub fn name(self) -> &'static str {
        match self {
            DirectionMode::Fm => "fm",
            DirectionMode::QnLbfgs => "qn_lbfgs",
            DirectionMode::QnBlock => "qn_block",
            DirectionMode::Sgd => "sgd",
        }
    }

    /// Whether the mode runs on SVRG directions (and therefore needs a
    /// live anchor gradient).
    pub fn uses_anchor(self) -> bool {
        !matches!(self, DirectionMode::Sgd)
    }
}

/// Proximal baseline selection. `None` in [`SolverConfig`] means an
/// OPDA mode drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMode {
    ProxSvrg,
    ProxSgd,
}

impl BaselineMode {
    pub fn name(self) -> &'static str {
        match self {
            BaselineMode::ProxSvrg => "prox_svrg",
            BaselineMode::ProxSgd => "prox_sgd",
        }
    }
}

/// How the next reference point is chosen from an epoch's iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorChoice {
    /// Mean of the epoch's freshly produced iterates.
    Average,
    /// One of the epoch's iterates, drawn uniformly.
    UniformRandom,
}

impl AnchorChoice {
    pub fn name(self) -> &'static str {
        match self {
            AnchorChoice::Average => "average",
            AnchorChoice::UniformRandom => "uniform_random",
        }
    }
}

/// Full description of one solver run. Exactly one of
/// `direction_mode` / `baseline_mode` drives the run: when
/// `baseline_mode` is `Some`, the baseline runners apply and
/// `direction_mode` must not be relied on.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Constant stepsize, strictly positive.
    pub eta: f64,
    /// L1 regularization weight.
    pub lambda1: f64,
    /// Minibatch size.
    pub batch: usize,
    /// Inner iterations per epoch.
    pub m_inner: usize,
    /// Curvature memory (pairs or triples) and the block refresh period.
    pub memory: usize,
    /// Sketch width for block L-BFGS.
    pub rank: usize,
    pub direction_mode: DirectionMode,
    pub baseline_mode: Option<BaselineMode>,
    pub anchor_choice: AnchorChoice,
    pub sketch: SketchKind,
    pub seed: u64,
    /// Maximum outer epochs.
    pub max_outer: usize,
    /// Early-stop threshold on the gradient-mapping norm, evaluated once
    /// per epoch. Zero disables early stopping except at exact fixed
    /// points.
    pub tol_gradmap: f64,
    /// Known optimal objective value, for suboptimality traces.
    pub fstar: Option<f64>,
}

impl SolverConfig {
    /// A minimal single-step configuration; adjust fields as needed.
    pub fn new(eta: f64, lambda1: f64) -> Self {
        Self {
            eta,
            lambda1,
            batch: 1,
            m_inner: 1,
            memory: 5,
            rank: 1,
            direction_mode: DirectionMode::Fm,
            baseline_mode: None,
            anchor_choice: AnchorChoice::Average,
            sketch: SketchKind::IdentityCols,
            seed: 0,
            max_outer: 1,
            tol_gradmap: 0.0,
            fstar: None,
        }
    }

    /// The default stepsize `0.1 / L` from the objective's smoothness
    /// estimate.
    pub fn default_eta(obj: &Objective) -> Result<f64> {
        let est = obj.estimate_smoothness()?;
        if est.l_upper <= 0.0 {
            return Err(Error::Argument(
                "smoothness upper bound must be positive for the default stepsize".into(),
            ));
        }
        Ok(0.1 / est.l_upper)
    }

    /// Validates every invariant against the objective's shape. Collects
    /// all problems into one config error.
    pub fn validate(&self, obj: &Objective) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.eta.is_finite() && self.eta > 0.0) {
            problems.push(format!("eta must be positive, got {}", self.eta));
        }
        if !(self.lambda1.is_finite() && self.lambda1 >= 0.0) {
            problems.push(format!("lambda1 must be nonnegative, got {}", self.lambda1));
        }
        let n = obj.n_samples();
        if self.batch == 0 || self.batch > n {
            problems.push(format!(
                "batch must satisfy 1 <= batch <= {n}, got {}",
                self.batch
            ));
        }
        if self.m_inner == 0 {
            problems.push("m_inner must be positive".into());
        }
        if self.memory == 0 {
            problems.push("memory must be positive".into());
        }
        if self.direction_mode == DirectionMode::QnBlock && self.baseline_mode.is_none() {
            let d = obj.dim();
            if self.rank == 0 || self.rank > d {
                problems.push(format!(
                    "rank must satisfy 1 <= rank <= {d}, got {}",
                    self.rank
                ));
            }
        }
        if self.max_outer == 0 {
            problems.push("max_outer must be positive".into());
        }
        if !(self.tol_gradmap.is_finite() && self.tol_gradmap >= 0.0) {
            problems.push(format!(
                "tol_gradmap must be nonnegative, got {}",
                self.tol_gradmap
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{SparseDataset, SparseRow};

    fn tiny_objective() -> Objective {
        let data = SparseDataset::new(
            vec![
                SparseRow::new(vec![0], vec![1.0]).unwrap(),
                SparseRow::new(vec![1], vec![1.0]).unwrap(),
            ],
            vec![1.0, -1.0],
            2,
        )
        .unwrap();
        Objective::logistic(data, 0.0).unwrap()
    }

    #[test]
    fn validate_collects_all_problems() {
        let obj = tiny_objective();
        let cfg = SolverConfig {
            eta: -1.0,
            batch: 5,
            m_inner: 0,
            ..SolverConfig::new(0.1, 0.0)
        };
        let err = cfg.validate(&obj).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("eta"));
        assert!(msg.contains("batch"));
        assert!(msg.contains("m_inner"));
    }

    #[test]
    fn block_rank_bounds_checked() {
        let obj = tiny_objective();
        let cfg = SolverConfig {
            direction_mode: DirectionMode::QnBlock,
            rank: 0,
            ..SolverConfig::new(0.1, 0.0)
        };
        assert!(cfg.validate(&obj).is_err());
        let cfg = SolverConfig {
            direction_mode: DirectionMode::QnBlock,
            rank: 3,
            ..SolverConfig::new(0.1, 0.0)
        };
        assert!(cfg.validate(&obj).is_err());
    }

    #[test]
    fn default_eta_uses_smoothness() {
        let obj = tiny_objective();
        // max ||a||^2 / 4 = 0.25 so eta = 0.1 / 0.25.
        assert_eq!(SolverConfig::default_eta(&obj).unwrap(), 0.4);
    }
}
