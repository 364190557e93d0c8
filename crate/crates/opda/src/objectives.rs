//! Smooth loss components F(x): value, full gradient, minibatch
//! gradient, and matrix-free Hessian-vector products.
//!
//! Three objective kinds are supported: L2-regularized logistic
//! regression and least squares over a sparse dataset, and a
//! two-dimensional polynomial family for desk-scale studies. The ridge
//! term `l2 * ||x||^2` lives in the smooth part, never in the L1
//! regularizer, so the strong-convexity floor is exactly `2 * l2`.

use crate::numcore::{sparse_dot, DenseMatrix, ParamVector, SparseDataset};
use crate::{Error, Result};

/// Coefficients of the two-dimensional polynomial
///
/// ```text
/// F(x) = sum_k (x1 + square_shifts[k])^2
///        + cross * x1 * x2
///        + cubic_x1 * x1^3
///        + cubic_x2 * (x2 + cubic_x2_shift)^3
/// ```
///
/// With `cross = cubic_x1 = cubic_x2 = 0` this is a convex bowl that
/// depends on `x1` only; nonzero cubic terms make it nonconvex.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    pub square_shifts: Vec<f64>,
    pub cross: f64,
    pub cubic_x1: f64,
    pub cubic_x2: f64,
    pub cubic_x2_shift: f64,
}

impl Default for PolySpec {
    fn default() -> Self {
        Self {
            square_shifts: vec![4.0, 2.0],
            cross: 0.0,
            cubic_x1: 0.0,
            cubic_x2: 0.0,
            cubic_x2_shift: 12.0,
        }
    }
}

impl PolySpec {
    fn value(&self, x1: f64, x2: f64) -> f64 {
        let squares: f64 = self
            .square_shifts
            .iter()
            .map(|s| (x1 + s) * (x1 + s))
            .sum();
        squares
            + self.cross * x1 * x2
            + self.cubic_x1 * x1.powi(3)
            + self.cubic_x2 * (x2 + self.cubic_x2_shift).powi(3)
    }

    fn gradient(&self, x1: f64, x2: f64) -> [f64; 2] {
        let dsq: f64 = self.square_shifts.iter().map(|s| 2.0 * (x1 + s)).sum();
        [
            dsq + self.cross * x2 + 3.0 * self.cubic_x1 * x1 * x1,
            self.cross * x1
                + 3.0 * self.cubic_x2 * (x2 + self.cubic_x2_shift) * (x2 + self.cubic_x2_shift),
        ]
    }

    /// Row-major 2x2 Hessian `[h11, h12, h21, h22]`.
    pub fn hessian(&self, x1: f64, x2: f64) -> [f64; 4] {
        let h11 = 2.0 * self.square_shifts.len() as f64 + 6.0 * self.cubic_x1 * x1;
        let h22 = 6.0 * self.cubic_x2 * (x2 + self.cubic_x2_shift);
        [h11, self.cross, self.cross, h22]
    }
}

/// Bounds on the Hessian spectrum used for default stepsizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessEstimate {
    pub l_upper: f64,
    pub mu_lower: f64,
}

/// A smooth finite-sum objective F(x).
#[derive(Debug, Clone)]
pub enum Objective {
    Logistic { data: SparseDataset, l2: f64 },
    LeastSquares { data: SparseDataset, l2: f64 },
    Poly2d { spec: PolySpec },
}

impl Objective {
    pub fn logistic(data: SparseDataset, l2: f64) -> Result<Self> {
        check_l2(l2)?;
        Ok(Self::Logistic { data, l2 })
    }

    pub fn least_squares(data: SparseDataset, l2: f64) -> Result<Self> {
        check_l2(l2)?;
        Ok(Self::LeastSquares { data, l2 })
    }

    pub fn poly2d(spec: PolySpec) -> Self {
        Self::Poly2d { spec }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Logistic { data, .. } | Self::LeastSquares { data, .. } => data.dim(),
            Self::Poly2d { .. } => 2,
        }
    }

    pub fn n_samples(&self) -> usize {
        match self {
            Self::Logistic { data, .. } | Self::LeastSquares { data, .. } => data.n_samples(),
            Self::Poly2d { .. } => 1,
        }
    }

    pub fn l2(&self) -> f64 {
        match self {
            Self::Logistic { l2, .. } | Self::LeastSquares { l2, .. } => *l2,
            Self::Poly2d { .. } => 0.0,
        }
    }

    /// Mean stored entries per sample row, for the deterministic cost
    /// model.
    pub fn avg_row_nnz(&self) -> f64 {
        match self {
            Self::Logistic { data, .. } | Self::LeastSquares { data, .. } => data.avg_nnz(),
            Self::Poly2d { .. } => 2.0,
        }
    }

    /// F(x).
    pub fn value(&self, x: &ParamVector) -> Result<f64> {
        self.check_dim(x)?;
        match self {
            Self::Logistic { data, l2 } => {
                let mut sum = 0.0;
                for n in 0..data.n_samples() {
                    let t = sparse_dot(data.row(n), x)?;
                    sum += log1p_exp(-data.label(n) * t);
                }
                Ok(sum / data.n_samples() as f64 + l2 * squared_norm(x))
            }
            Self::LeastSquares { data, l2 } => {
                let mut sum = 0.0;
                for n in 0..data.n_samples() {
                    let r = sparse_dot(data.row(n), x)? - data.label(n);
                    sum += r * r;
                }
                Ok(sum / (2.0 * data.n_samples() as f64) + l2 * squared_norm(x))
            }
            Self::Poly2d { spec } => Ok(spec.value(x[0], x[1])),
        }
    }

    /// Exact gradient of `value`.
    pub fn grad_full(&self, x: &ParamVector) -> Result<ParamVector> {
        let all: Vec<usize> = (0..self.n_samples()).collect();
        self.grad_minibatch(x, &all)
    }

    /// Gradient of the subsampled average over `s`, including the ridge
    /// term. Accumulation follows the order of `s`.
    pub fn grad_minibatch(&self, x: &ParamVector, s: &[usize]) -> Result<ParamVector> {
        self.check_dim(x)?;
        self.check_subset(s)?;
        match self {
            Self::Logistic { data, l2 } => {
                let mut g = vec![0.0; data.dim()];
                for &n in s {
                    let b = data.label(n);
                    let t = sparse_dot(data.row(n), x)?;
                    let c = -b * sigmoid(-b * t);
                    for (i, v) in data.row(n).iter() {
                        g[i] += c * v;
                    }
                }
                finish_grad(g, s.len(), *l2, x)
            }
            Self::LeastSquares { data, l2 } => {
                let mut g = vec![0.0; data.dim()];
                for &n in s {
                    let c = sparse_dot(data.row(n), x)? - data.label(n);
                    for (i, v) in data.row(n).iter() {
                        g[i] += c * v;
                    }
                }
                finish_grad(g, s.len(), *l2, x)
            }
            Self::Poly2d { spec } => ParamVector::new(spec.gradient(x[0], x[1]).to_vec()),
        }
    }

    /// Matrix-free product of the subsampled Hessian with every column
    /// of `m`.
    pub fn hvp_minibatch(
        &self,
        x: &ParamVector,
        s: &[usize],
        m: &DenseMatrix,
    ) -> Result<DenseMatrix> {
        self.check_dim(x)?;
        self.check_subset(s)?;
        if m.rows() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: m.rows(),
            });
        }
        let mut out = DenseMatrix::zeros(m.rows(), m.cols());
        match self {
            Self::Logistic { data, l2 } => {
                for j in 0..m.cols() {
                    let col = m.col(j);
                    let acc = out.col_mut(j);
                    for &n in s {
                        let row = data.row(n);
                        let b = data.label(n);
                        let sn = sigmoid(b * sparse_dot(row, x)?);
                        let w = sn * (1.0 - sn);
                        let t: f64 = row.iter().map(|(i, v)| v * col[i]).sum();
                        let c = w * t;
                        for (i, v) in row.iter() {
                            acc[i] += c * v;
                        }
                    }
                    let inv = 1.0 / s.len() as f64;
                    for (a, v) in acc.iter_mut().zip(col) {
                        *a = *a * inv + 2.0 * l2 * v;
                    }
                }
            }
            Self::LeastSquares { data, l2 } => {
                for j in 0..m.cols() {
                    let col = m.col(j);
                    let acc = out.col_mut(j);
                    for &n in s {
                        let row = data.row(n);
                        let t: f64 = row.iter().map(|(i, v)| v * col[i]).sum();
                        for (i, v) in row.iter() {
                            acc[i] += t * v;
                        }
                    }
                    let inv = 1.0 / s.len() as f64;
                    for (a, v) in acc.iter_mut().zip(col) {
                        *a = *a * inv + 2.0 * l2 * v;
                    }
                }
            }
            Self::Poly2d { spec } => {
                let h = spec.hessian(x[0], x[1]);
                for j in 0..m.cols() {
                    let col = m.col(j);
                    let acc = out.col_mut(j);
                    acc[0] = h[0] * col[0] + h[1] * col[1];
                    acc[1] = h[2] * col[0] + h[3] * col[1];
                }
            }
        }
        if !out.is_finite() {
            return Err(Error::NonFinite {
                context: "hessian-vector product",
            });
        }
        Ok(out)
    }

    /// Conservative spectrum bounds from per-sample row norms. Not
    /// defined for the polynomial objective, whose Hessian is
    /// state-dependent.
    pub fn estimate_smoothness(&self) -> Result<SmoothnessEstimate> {
        match self {
            Self::Logistic { data, l2 } => {
                let max_sq = max_row_sq(data);
                Ok(SmoothnessEstimate {
                    l_upper: max_sq / 4.0 + 2.0 * l2,
                    mu_lower: 2.0 * l2,
                })
            }
            Self::LeastSquares { data, l2 } => {
                let max_sq = max_row_sq(data);
                Ok(SmoothnessEstimate {
                    l_upper: max_sq + 2.0 * l2,
                    mu_lower: 2.0 * l2,
                })
            }
            Self::Poly2d { .. } => Err(Error::Unsupported(
                "smoothness estimate is not defined for the polynomial objective".into(),
            )),
        }
    }

    fn check_dim(&self, x: &ParamVector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    fn check_subset(&self, s: &[usize]) -> Result<()> {
        if s.is_empty() {
            return Err(Error::Argument("minibatch index set is empty".into()));
        }
        let n = self.n_samples();
        if let Some(&bad) = s.iter().find(|&&i| i >= n) {
            return Err(Error::Argument(format!(
                "minibatch index {bad} out of range for {n} samples"
            )));
        }
        Ok(())
    }
}

fn check_l2(l2: f64) -> Result<()> {
    if !l2.is_finite() || l2 < 0.0 {
        return Err(Error::Argument(format!(
            "l2 coefficient must be finite and nonnegative, got {l2}"
        )));
    }
    Ok(())
}

fn squared_norm(x: &ParamVector) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn max_row_sq(data: &SparseDataset) -> f64 {
    data.rows()
        .iter()
        .map(|r| r.squared_norm())
        .fold(0.0f64, f64::max)
}

fn finish_grad(mut g: Vec<f64>, count: usize, l2: f64, x: &ParamVector) -> Result<ParamVector> {
    let inv = 1.0 / count as f64;
    for (gi, xi) in g.iter_mut().zip(x.iter()) {
        *gi = *gi * inv + 2.0 * l2 * xi;
    }
    ParamVector::new(g)
}

/// Numerically stable `log(1 + exp(z))`.
fn log1p_exp(z: f64) -> f64 {
    if z <= 0.0 {
        z.exp().ln_1p()
    } else {
        z + (-z).exp().ln_1p()
    }
}

/// Numerically stable logistic sigmoid.
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::SparseRow;

    fn single_sample(indices: Vec<usize>, values: Vec<f64>, label: f64, dim: usize) -> SparseDataset {
        SparseDataset::new(
            vec![SparseRow::new(indices, values).unwrap()],
            vec![label],
            dim,
        )
        .unwrap()
    }

    fn pv(values: &[f64]) -> ParamVector {
        ParamVector::from_slice(values).unwrap()
    }

    #[test]
    fn logistic_value_at_origin_is_log_two() {
        let obj = Objective::logistic(single_sample(vec![0], vec![1.0], 1.0, 2), 0.0).unwrap();
        let v = obj.value(&pv(&[0.0, 0.0])).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn least_squares_exact_fit_is_zero() {
        // Labels are +-1; a row [0.5] with label +1 fits exactly at x = 2.
        let obj =
            Objective::least_squares(single_sample(vec![0], vec![0.5], 1.0, 1), 0.0).unwrap();
        let v = obj.value(&pv(&[2.0])).unwrap();
        assert_eq!(v, 0.0);
        let g = obj.grad_full(&pv(&[2.0])).unwrap();
        assert_eq!(g.as_slice(), &[0.0]);
    }

    #[test]
    fn poly_value_matches_hand_evaluation() {
        let obj = Objective::poly2d(PolySpec::default());
        let v = obj.value(&pv(&[-0.5, 0.0])).unwrap();
        assert_eq!(v, 3.5 * 3.5 + 1.5 * 1.5);
    }

    #[test]
    fn logistic_gradient_at_origin() {
        let obj = Objective::logistic(single_sample(vec![0], vec![1.0], 1.0, 2), 0.0).unwrap();
        let g = obj.grad_full(&pv(&[0.0, 0.0])).unwrap();
        assert_eq!(g.as_slice(), &[-0.5, 0.0]);
    }

    #[test]
    fn minibatch_full_set_matches_grad_full() {
        let data = SparseDataset::new(
            vec![
                SparseRow::new(vec![0], vec![1.0]).unwrap(),
                SparseRow::new(vec![0, 1], vec![0.5, -2.0]).unwrap(),
                SparseRow::new(vec![1], vec![3.0]).unwrap(),
            ],
            vec![1.0, -1.0, 1.0],
            2,
        )
        .unwrap();
        let obj = Objective::logistic(data, 0.1).unwrap();
        let x = pv(&[0.3, -0.7]);
        let full = obj.grad_full(&x).unwrap();
        let mb = obj.grad_minibatch(&x, &[0, 1, 2]).unwrap();
        assert_eq!(full, mb);
    }

    #[test]
    fn singleton_minibatch_formula() {
        let obj = Objective::logistic(single_sample(vec![0], vec![2.0], -1.0, 1), 0.25).unwrap();
        let x = pv(&[0.4]);
        let g = obj.grad_minibatch(&x, &[0]).unwrap();
        let t = 2.0 * 0.4;
        let want = -(-1.0) * sigmoid(1.0 * t) * 2.0 + 2.0 * 0.25 * 0.4;
        assert!((g[0] - want).abs() < 1e-15);
    }

    #[test]
    fn empty_minibatch_rejected() {
        let obj = Objective::logistic(single_sample(vec![0], vec![1.0], 1.0, 1), 0.0).unwrap();
        assert!(obj.grad_minibatch(&pv(&[0.0]), &[]).is_err());
        assert!(obj.grad_minibatch(&pv(&[0.0]), &[1]).is_err());
    }

    #[test]
    fn hvp_logistic_hand_case() {
        let obj = Objective::logistic(single_sample(vec![0], vec![1.0], 1.0, 2), 0.0).unwrap();
        let m = DenseMatrix::from_columns(&[vec![2.0, 2.0]]).unwrap();
        let out = obj
            .hvp_minibatch(&pv(&[0.0, 0.0]), &[0], &m)
            .unwrap();
        assert_eq!(out.col(0), &[0.5, 0.0]);
    }

    #[test]
    fn hvp_least_squares_independent_of_x() {
        let data = SparseDataset::new(
            vec![
                SparseRow::new(vec![0], vec![1.0]).unwrap(),
                SparseRow::new(vec![1], vec![2.0]).unwrap(),
            ],
            vec![1.0, -1.0],
            2,
        )
        .unwrap();
        let obj = Objective::least_squares(data, 0.05).unwrap();
        let m = DenseMatrix::from_columns(&[vec![1.0, 1.0]]).unwrap();
        let a = obj.hvp_minibatch(&pv(&[0.0, 0.0]), &[0, 1], &m).unwrap();
        let b = obj.hvp_minibatch(&pv(&[5.0, -3.0]), &[0, 1], &m).unwrap();
        assert_eq!(a, b);
        // (1/2)(diag(1,0) + diag(0,4)) + 0.1 I applied to ones.
        assert!((a.col(0)[0] - 0.6).abs() < 1e-15);
        assert!((a.col(0)[1] - 2.1).abs() < 1e-15);
    }

    #[test]
    fn smoothness_estimates() {
        let obj = Objective::logistic(single_sample(vec![0], vec![2.0], 1.0, 1), 0.0).unwrap();
        let est = obj.estimate_smoothness().unwrap();
        assert_eq!(est.l_upper, 1.0);
        assert_eq!(est.mu_lower, 0.0);

        let obj = Objective::logistic(single_sample(vec![0], vec![2.0], 1.0, 1), 0.5).unwrap();
        let est = obj.estimate_smoothness().unwrap();
        assert_eq!(est.l_upper, 2.0);
        assert_eq!(est.mu_lower, 1.0);

        let poly = Objective::poly2d(PolySpec::default());
        assert!(matches!(
            poly.estimate_smoothness(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let data = SparseDataset::new(
            vec![
                SparseRow::new(vec![0, 1], vec![1.0, -0.5]).unwrap(),
                SparseRow::new(vec![1, 2], vec![2.0, 0.25]).unwrap(),
                SparseRow::new(vec![0, 2], vec![-1.5, 1.0]).unwrap(),
            ],
            vec![1.0, -1.0, 1.0],
            3,
        )
        .unwrap();
        for obj in [
            Objective::logistic(data.clone(), 0.01).unwrap(),
            Objective::least_squares(data, 0.01).unwrap(),
            Objective::poly2d(PolySpec {
                cross: 0.1,
                cubic_x1: 0.02,
                cubic_x2: 0.02,
                ..PolySpec::default()
            }),
        ] {
            let d = obj.dim();
            let x = pv(&(0..d).map(|i| 0.3 - 0.2 * i as f64).collect::<Vec<_>>());
            let g = obj.grad_full(&x).unwrap();
            let h = 1e-6;
            for i in 0..d {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] += h;
                xm[i] -= h;
                let fd = (obj.value(&pv(&xp)).unwrap() - obj.value(&pv(&xm)).unwrap()) / (2.0 * h);
                assert!(
                    (fd - g[i]).abs() <= 1e-5 * g[i].abs().max(1.0),
                    "coordinate {i}: fd {fd} vs grad {}",
                    g[i]
                );
            }
        }
    }
}
