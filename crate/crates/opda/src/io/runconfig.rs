use crate::directions::SketchKind;
use crate::numcore::SparseDataset;
use crate::objectives::{Objective, PolySpec};
use crate::solvers::{AnchorChoice, BaselineMode, DirectionMode, SolverConfig};
use crate::{Error, Result};

/// Objective kind named in a run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    Logistic,
    LeastSquares,
    Poly2d,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            LossKind::Logistic => "logistic",
            LossKind::LeastSquares => "least_squares",
            LossKind::Poly2d => "poly2d",
        }
    }
}

/// A parsed run configuration. `None` fields take their documented
/// defaults when materialized against a concrete objective:
///
/// * `batch`: ceil(sqrt(N))
/// * `m_inner`: ceil(N / batch)
/// * `memory`: 5
/// * `rank`: max(1, floor(sqrt(D)))
/// * `lambda1`: 1e-5 * D^(1/4) / N^(1/4) for dataset losses, 0 for the
///   polynomial
/// * `lambda2`: 1 / N
/// * `eta`: 0.1 / L from the smoothness estimate
///
/// With `nonconvex_preset = true` the defaults switch to
/// `batch = ceil(N^(2/3))`, `m_inner = ceil(N / batch)`, and
/// `eta = batch / (4 L N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: Option<String>,
    pub loss: LossKind,
    pub normalize: bool,
    pub dim: Option<usize>,
    pub trace: Option<String>,
    pub eta: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub batch: Option<usize>,
    pub m_inner: Option<usize>,
    pub memory: Option<usize>,
    pub rank: Option<usize>,
    pub direction_mode: Option<DirectionMode>,
    pub baseline_mode: Option<BaselineMode>,
    pub anchor_choice: Option<AnchorChoice>,
    pub sketch: Option<SketchKind>,
    pub seed: Option<u64>,
    pub max_outer: Option<usize>,
    pub tol_gradmap: Option<f64>,
    pub fstar: Option<f64>,
    pub nonconvex_preset: bool,
    pub poly_square_shifts: Option<Vec<f64>>,
    pub poly_cross: Option<f64>,
    pub poly_cubic_x1: Option<f64>,
    pub poly_cubic_x2: Option<f64>,
    pub poly_cubic_x2_shift: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data: None,
            loss: LossKind::Logistic,
            normalize: false,
            dim: None,
            trace: None,
            eta: None,
            lambda1: None,
            lambda2: None,
            batch: None,
            m_inner: None,
            memory: None,
            rank: None,
            direction_mode: None,
            baseline_mode: None,
            anchor_choice: None,
            sketch: None,
            seed: None,
            max_outer: None,
            tol_gradmap: None,
            fstar: None,
            nonconvex_preset: false,
            poly_square_shifts: None,
            poly_cross: None,
            poly_cubic_x1: None,
            poly_cubic_x2: None,
            poly_cubic_x2_shift: None,
        }
    }
}

impl RunConfig {
    /// Polynomial coefficients, with unset fields falling back to the
    /// convex two-term bowl.
    pub fn poly_spec(&self) -> PolySpec {
        let base = PolySpec::default();
        PolySpec {
            square_shifts: self
                .poly_square_shifts
                .clone()
                .unwrap_or(base.square_shifts),
            cross: self.poly_cross.unwrap_or(base.cross),
            cubic_x1: self.poly_cubic_x1.unwrap_or(base.cubic_x1),
            cubic_x2: self.poly_cubic_x2.unwrap_or(base.cubic_x2),
            cubic_x2_shift: self.poly_cubic_x2_shift.unwrap_or(base.cubic_x2_shift),
        }
    }

    /// Ridge coefficient, defaulting to `1 / N`.
    pub fn resolve_l2(&self, n: usize) -> f64 {
        self.lambda2.unwrap_or(1.0 / n as f64)
    }

    /// Fills every remaining default against the concrete objective and
    /// validates the result.
    pub fn materialize(&self, obj: &Objective) -> Result<SolverConfig> {
        let n = obj.n_samples();
        let d = obj.dim();
        let nf = n as f64;

        let default_batch = if self.nonconvex_preset {
            nf.powf(2.0 / 3.0).ceil() as usize
        } else {
            nf.sqrt().ceil() as usize
        };
        let batch = self.batch.unwrap_or(default_batch.clamp(1, n));
        let m_inner = self
            .m_inner
            .unwrap_or_else(|| ((nf / batch.max(1) as f64).ceil() as usize).max(1));
        let lambda1 = self.lambda1.unwrap_or(match obj {
            Objective::Poly2d { .. } => 0.0,
            _ => 1e-5 * (d as f64).powf(0.25) / nf.powf(0.25),
        });
        let eta = match self.eta {
            Some(e) => e,
            None => {
                let est = obj.estimate_smoothness().map_err(|_| {
                    Error::Config(
                        "eta must be given explicitly for the polynomial objective".into(),
                    )
                })?;
                let l = est.l_upper.max(f64::MIN_POSITIVE);
                if self.nonconvex_preset {
                    batch as f64 / (4.0 * l * nf)
                } else {
                    0.1 / l
                }
            }
        };
        let cfg = SolverConfig {
            eta,
            lambda1,
            batch,
            m_inner,
            memory: self.memory.unwrap_or(5),
            rank: self
                .rank
                .unwrap_or_else(|| (((d as f64).sqrt().floor() as usize).max(1)).min(d)),
            direction_mode: self.direction_mode.unwrap_or(DirectionMode::Fm),
            baseline_mode: self.baseline_mode,
            anchor_choice: self.anchor_choice.unwrap_or(AnchorChoice::Average),
            sketch: self.sketch.unwrap_or(SketchKind::IdentityCols),
            seed: self.seed.unwrap_or(0),
            max_outer: self.max_outer.unwrap_or(30),
            tol_gradmap: self.tol_gradmap.unwrap_or(0.0),
            fstar: self.fstar,
        };
        cfg.validate(obj)?;
        Ok(cfg)
    }
}

/// Builds the objective named by the configuration. Dataset losses take
/// the (already normalized, if requested) parsed dataset; the
/// polynomial ignores it.
pub fn build_objective(cfg: &RunConfig, data: Option<SparseDataset>) -> Result<Objective> {
    match cfg.loss {
        LossKind::Poly2d => Ok(Objective::poly2d(cfg.poly_spec())),
        kind => {
            let data = data.ok_or_else(|| {
                Error::Config(format!("loss {} requires a dataset", kind.name()))
            })?;
            let l2 = cfg.resolve_l2(data.n_samples());
            match kind {
                LossKind::Logistic => Objective::logistic(data, l2),
                LossKind::LeastSquares => Objective::least_squares(data, l2),
                LossKind::Poly2d => unreachable!(),
            }
        }
    }
}

/// Parses the flat `key = value` grammar. Unknown keys, duplicate keys,
/// malformed values, contradictory modes, and a missing data path are
/// all reported together in one config error.
pub fn load_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut problems: Vec<String> = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    let mut direction_set = false;
    let mut baseline_set_nontrivial = false;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            problems.push(format!("line {lineno}: expected `key = value`, got {line:?}"));
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|k| k == key) {
            problems.push(format!("line {lineno}: duplicate key {key:?}"));
            continue;
        }
        seen.push(key.to_string());

        let mut bad = |msg: String| problems.push(format!("line {lineno}: {msg}"));
        match key {
            "data" => cfg.data = Some(value.to_string()),
            "trace" => cfg.trace = Some(value.to_string()),
            "loss" => match parse_loss(value) {
                Some(l) => cfg.loss = l,
                None => bad(format!("unknown loss {value:?}")),
            },
            "normalize" => match value.parse() {
                Ok(b) => cfg.normalize = b,
                Err(_) => bad(format!("normalize must be true or false, got {value:?}")),
            },
            "nonconvex_preset" => match value.parse() {
                Ok(b) => cfg.nonconvex_preset = b,
                Err(_) => bad(format!(
                    "nonconvex_preset must be true or false, got {value:?}"
                )),
            },
            "dim" => parse_into(value, &mut cfg.dim, key, &mut problems, lineno),
            "eta" => parse_into(value, &mut cfg.eta, key, &mut problems, lineno),
            "lambda1" => parse_into(value, &mut cfg.lambda1, key, &mut problems, lineno),
            "lambda2" => parse_into(value, &mut cfg.lambda2, key, &mut problems, lineno),
            "batch" => parse_into(value, &mut cfg.batch, key, &mut problems, lineno),
            "m_inner" => parse_into(value, &mut cfg.m_inner, key, &mut problems, lineno),
            "memory" => parse_into(value, &mut cfg.memory, key, &mut problems, lineno),
            "rank" => parse_into(value, &mut cfg.rank, key, &mut problems, lineno),
            "seed" => parse_into(value, &mut cfg.seed, key, &mut problems, lineno),
            "max_outer" => parse_into(value, &mut cfg.max_outer, key, &mut problems, lineno),
            "tol_gradmap" => parse_into(value, &mut cfg.tol_gradmap, key, &mut problems, lineno),
            "fstar" => parse_into(value, &mut cfg.fstar, key, &mut problems, lineno),
            "poly_cross" => parse_into(value, &mut cfg.poly_cross, key, &mut problems, lineno),
            "poly_cubic_x1" => {
                parse_into(value, &mut cfg.poly_cubic_x1, key, &mut problems, lineno)
            }
            "poly_cubic_x2" => {
                parse_into(value, &mut cfg.poly_cubic_x2, key, &mut problems, lineno)
            }
            "poly_cubic_x2_shift" => {
                parse_into(value, &mut cfg.poly_cubic_x2_shift, key, &mut problems, lineno)
            }
            "poly_square_shifts" => {
                let parsed: std::result::Result<Vec<f64>, _> =
                    value.split(',').map(|t| t.trim().parse()).collect();
                match parsed {
                    Ok(v) if !v.is_empty() => cfg.poly_square_shifts = Some(v),
                    _ => bad(format!("poly_square_shifts must be a comma list of reals")),
                }
            }
            "direction_mode" => match parse_direction(value) {
                Some(m) => {
                    cfg.direction_mode = Some(m);
                    direction_set = true;
                }
                None => bad(format!("unknown direction_mode {value:?}")),
            },
            "baseline_mode" => match normalize_token(value).as_str() {
                "none" => cfg.baseline_mode = None,
                "prox_svrg" => {
                    cfg.baseline_mode = Some(BaselineMode::ProxSvrg);
                    baseline_set_nontrivial = true;
                }
                "prox_sgd" => {
                    cfg.baseline_mode = Some(BaselineMode::ProxSgd);
                    baseline_set_nontrivial = true;
                }
                _ => bad(format!("unknown baseline_mode {value:?}")),
            },
            "anchor_choice" => match normalize_token(value).as_str() {
                "average" => cfg.anchor_choice = Some(AnchorChoice::Average),
                "uniform_random" => cfg.anchor_choice = Some(AnchorChoice::UniformRandom),
                _ => bad(format!("unknown anchor_choice {value:?}")),
            },
            "sketch" => match parse_sketch(value) {
                Some(s) => cfg.sketch = Some(s),
                None => bad(format!("unknown sketch {value:?}")),
            },
            _ => problems.push(format!("line {lineno}: unknown key {key:?}")),
        }
    }

    if direction_set && baseline_set_nontrivial {
        problems.push(
            "contradictory modes: direction_mode and baseline_mode are both set".into(),
        );
    }
    if cfg.loss != LossKind::Poly2d && cfg.data.is_none() {
        problems.push(format!("loss {} requires a data path", cfg.loss.name()));
    }
    if let Some(eta) = cfg.eta {
        if !(eta.is_finite() && eta > 0.0) {
            problems.push(format!("eta must be positive, got {eta}"));
        }
    }
    if let Some(l1) = cfg.lambda1 {
        if !(l1.is_finite() && l1 >= 0.0) {
            problems.push(format!("lambda1 must be nonnegative, got {l1}"));
        }
    }
    if let Some(l2) = cfg.lambda2 {
        if !(l2.is_finite() && l2 >= 0.0) {
            problems.push(format!("lambda2 must be nonnegative, got {l2}"));
        }
    }

    if problems.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(problems.join("; ")))
    }
}

/// Writes a configuration back to the flat grammar. Only explicitly set
/// fields are emitted, so `load_config(serialize_config(c)) == c` for
/// every valid configuration.
pub fn serialize_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let mut put = |key: &str, value: String| {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&value);
        out.push('\n');
    };
    if let Some(v) = &cfg.data {
        put("data", v.clone());
    }
    put("loss", cfg.loss.name().to_string());
    if cfg.normalize {
        put("normalize", "true".to_string());
    }
    if let Some(v) = cfg.dim {
        put("dim", v.to_string());
    }
    if let Some(v) = &cfg.trace {
        put("trace", v.clone());
    }
    if let Some(v) = cfg.eta {
        put("eta", format!("{v}"));
    }
    if let Some(v) = cfg.lambda1 {
        put("lambda1", format!("{v}"));
    }
    if let Some(v) = cfg.lambda2 {
        put("lambda2", format!("{v}"));
    }
    if let Some(v) = cfg.batch {
        put("batch", v.to_string());
    }
    if let Some(v) = cfg.m_inner {
        put("m_inner", v.to_string());
    }
    if let Some(v) = cfg.memory {
        put("memory", v.to_string());
    }
    if let Some(v) = cfg.rank {
        put("rank", v.to_string());
    }
    if let Some(v) = cfg.direction_mode {
        put("direction_mode", v.name().to_string());
    }
    if let Some(v) = cfg.baseline_mode {
        put("baseline_mode", v.name().to_string());
    }
    if let Some(v) = cfg.anchor_choice {
        put("anchor_choice", v.name().to_string());
    }
    if let Some(v) = cfg.sketch {
        put("sketch", v.name().to_string());
    }
    if let Some(v) = cfg.seed {
        put("seed", v.to_string());
    }
    if let Some(v) = cfg.max_outer {
        put("max_outer", v.to_string());
    }
    if let Some(v) = cfg.tol_gradmap {
        put("tol_gradmap", format!("{v}"));
    }
    if let Some(v) = cfg.fstar {
        put("fstar", format!("{v}"));
    }
    if cfg.nonconvex_preset {
        put("nonconvex_preset", "true".to_string());
    }
    if let Some(v) = &cfg.poly_square_shifts {
        let joined: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
        put("poly_square_shifts", joined.join(","));
    }
    if let Some(v) = cfg.poly_cross {
        put("poly_cross", format!("{v}"));
    }
    if let Some(v) = cfg.poly_cubic_x1 {
        put("poly_cubic_x1", format!("{v}"));
    }
    if let Some(v) = cfg.poly_cubic_x2 {
        put("poly_cubic_x2", format!("{v}"));
    }
    if let Some(v) = cfg.poly_cubic_x2_shift {
        put("poly_cubic_x2_shift", format!("{v}"));
    }
    out
}

fn normalize_token(value: &str) -> String {
    value.trim().to_ascii_lowercase().replace('-', "_")
}

/// Accepts both the config spelling and the CLI hyphenated spelling.
pub(crate) fn parse_loss(value: &str) -> Option<LossKind> {
    match normalize_token(value).as_str() {
        "logistic" => Some(LossKind::Logistic),
        "least_squares" => Some(LossKind::LeastSquares),
        "poly2d" => Some(LossKind::Poly2d),
        _ => None,
    }
}

pub(crate) fn parse_direction(value: &str) -> Option<DirectionMode> {
    match normalize_token(value).as_str() {
        "fm" => Some(DirectionMode::Fm),
        "qn_lbfgs" => Some(DirectionMode::QnLbfgs),
        "qn_block" => Some(DirectionMode::QnBlock),
        "sgd" => Some(DirectionMode::Sgd),
        _ => None,
    }
}

pub(crate) fn parse_sketch(value: &str) -> Option<SketchKind> {
    match normalize_token(value).as_str() {
        "identity_cols" => Some(SketchKind::IdentityCols),
        "gaussian" => Some(SketchKind::Gaussian),
        "prev_directions" => Some(SketchKind::PrevDirections),
        _ => None,
    }
}

fn parse_into<T: std::str::FromStr>(
    value: &str,
    slot: &mut Option<T>,
    key: &str,
    problems: &mut Vec<String>,
    lineno: usize,
) {
    match value.parse() {
        Ok(v) => *slot = Some(v),
        Err(_) => problems.push(format!("line {lineno}: cannot parse {key} value {value:?}")),
    }
}
