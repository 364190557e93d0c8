use crate::{Error, Result};

/// Small column-major dense matrix. Used for sketches, Hessian-sketch
/// products, and the r-by-r inner systems of block L-BFGS.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from equal-length column buffers.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        if cols == 0 {
            return Err(Error::Argument("matrix needs at least one column".into()));
        }
        let rows = columns[0].len();
        let mut data = Vec::with_capacity(rows * cols);
        for c in columns {
            if c.len() != rows {
                return Err(Error::Dimension {
                    expected: rows,
                    got: c.len(),
                });
            }
            data.extend_from_slice(c);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `A^T v` where `v` has `rows` entries; result has `cols` entries.
    pub fn transpose_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                got: v.len(),
            });
        }
        Ok((0..self.cols)
            .map(|j| self.col(j).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A w` where `w` has `cols` entries; result has `rows` entries.
    pub fn apply(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                got: w.len(),
            });
        }
        let mut out = vec![0.0; self.rows];
        for (j, &wj) in w.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.col(j)) {
                *o += a * wj;
            }
        }
        Ok(out)
    }

    /// Gram-style product `self^T other` (cols_self x cols_other).
    pub fn transpose_mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                got: other.rows,
            });
        }
        let mut out = DenseMatrix::zeros(self.cols, other.cols);
        for j in 0..other.cols {
            for i in 0..self.cols {
                let v = self
                    .col(i)
                    .iter()
                    .zip(other.col(j))
                    .map(|(a, b)| a * b)
                    .sum();
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Returns `(self + self^T) / 2`; requires a square matrix.
    pub fn symmetrized(&self) -> Result<DenseMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension {
                expected: self.rows,
                got: self.cols,
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, 0.5 * (self.get(i, j) + self.get(j, i)));
            }
        }
        Ok(out)
    }
}

/// Cholesky factor L (lower triangular, `A = L L^T`) of a symmetric
/// matrix. Returns `None` when a pivot falls at or below the relative
/// floor, i.e. the matrix is not numerically positive-definite.
pub fn cholesky_lower(a: &DenseMatrix) -> Option<DenseMatrix> {
    if a.rows() != a.cols() {
        return None;
    }
    let n = a.rows();
    let max_diag = (0..n).map(|i| a.get(i, i).abs()).fold(0.0f64, f64::max);
    let floor = 1e-12 * max_diag.max(1e-300);
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if !(d.is_finite() && d > floor) {
            return None;
        }
        let dj = d.sqrt();
        l.set(j, j, dj);
        for i in (j + 1)..n {
            let mut v = a.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, v / dj);
        }
    }
    Some(l)
}

/// Inverse of `A = L L^T` given its Cholesky factor.
pub fn cholesky_inverse(l: &DenseMatrix) -> DenseMatrix {
    let n = l.rows();
    let mut inv = DenseMatrix::zeros(n, n);
    // Solve L L^T x = e_j column by column.
    for j in 0..n {
        let mut z = vec![0.0; n];
        for i in 0..n {
            let mut v = if i == j { 1.0 } else { 0.0 };
            for k in 0..i {
                v -= l.get(i, k) * z[k];
            }
            z[i] = v / l.get(i, i);
        }
        let col = inv.col_mut(j);
        for i in (0..n).rev() {
            let mut v = z[i];
            for k in (i + 1)..n {
                v -= l.get(k, i) * col[k];
            }
            col[i] = v / l.get(i, i);
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_and_transpose_apply() {
        // [[1, 3], [2, 4]] stored column-major
        let m = DenseMatrix::from_columns(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.apply(&[1.0, 1.0]).unwrap(), vec![4.0, 6.0]);
        assert_eq!(m.transpose_apply(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
    }

    #[test]
    fn cholesky_round_trip() {
        let a = DenseMatrix::from_columns(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = cholesky_lower(&a).expect("spd");
        let inv = cholesky_inverse(&l);
        // A * inv(A) == I
        for i in 0..2 {
            for j in 0..2 {
                let mut v = 0.0;
                for k in 0..2 {
                    v += a.get(i, k) * inv.get(k, j);
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = DenseMatrix::from_columns(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(cholesky_lower(&a).is_none());
        let singular = DenseMatrix::from_columns(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(cholesky_lower(&singular).is_none());
    }
}
