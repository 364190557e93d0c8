use crate::{Error, Result};

use super::ParamVector;

/// One sparse feature row: strictly ascending column indices paired with
/// nonzero finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseRow {
    pub fn new(indices: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::Dimension {
                expected: indices.len(),
                got: values.len(),
            });
        }
        for w in indices.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Argument(format!(
                    "sparse row indices must be strictly ascending, saw {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: "sparse row value",
                });
            }
            if v == 0.0 {
                return Err(Error::Argument(
                    "sparse row stores explicit zero".to_string(),
                ));
            }
        }
        Ok(Self { indices, values })
    }

    pub fn empty() -> Self {
        Self {
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.indices.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn squared_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Returns a copy with every value multiplied by `coeff`.
    pub fn scaled(&self, coeff: f64) -> Result<SparseRow> {
        SparseRow::new(
            self.indices.clone(),
            self.values.iter().map(|v| coeff * v).collect(),
        )
    }
}

/// Sparse product `row . v` over the stored indices.
pub fn sparse_dot(row: &SparseRow, v: &ParamVector) -> Result<f64> {
    if let Some(max) = row.max_index() {
        if max >= v.len() {
            return Err(Error::Dimension {
                expected: v.len(),
                got: max + 1,
            });
        }
    }
    let xs = v.as_slice();
    Ok(row.iter().map(|(i, val)| val * xs[i]).sum())
}

/// Compressed sparse row dataset with +-1 labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDataset {
    rows: Vec<SparseRow>,
    labels: Vec<f64>,
    dim: usize,
}

impl SparseDataset {
    pub fn new(rows: Vec<SparseRow>, labels: Vec<f64>, dim: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Data("dataset must contain at least one row".into()));
        }
        if rows.len() != labels.len() {
            return Err(Error::Dimension {
                expected: rows.len(),
                got: labels.len(),
            });
        }
        for (n, label) in labels.iter().enumerate() {
            if *label != 1.0 && *label != -1.0 {
                return Err(Error::Data(format!(
                    "label of row {n} must be -1 or +1, got {label}"
                )));
            }
        }
        for (n, row) in rows.iter().enumerate() {
            if let Some(max) = row.max_index() {
                if max >= dim {
                    return Err(Error::Data(format!(
                        "row {n} has feature index {max} outside dimension {dim}"
                    )));
                }
            }
        }
        Ok(Self { rows, labels, dim })
    }

    pub fn n_samples(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, n: usize) -> &SparseRow {
        &self.rows[n]
    }

    pub fn label(&self, n: usize) -> f64 {
        self.labels[n]
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Mean stored entries per row; feeds the deterministic cost model.
    pub fn avg_nnz(&self) -> f64 {
        let total: usize = self.rows.iter().map(SparseRow::nnz).sum();
        total as f64 / self.rows.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_dot_single_term() {
        let row = SparseRow::new(vec![0], vec![2.0]).unwrap();
        let v = ParamVector::from_slice(&[3.0, 9.0]).unwrap();
        assert_eq!(sparse_dot(&row, &v).unwrap(), 6.0);
    }

    #[test]
    fn sparse_dot_empty_row() {
        let row = SparseRow::empty();
        let v = ParamVector::from_slice(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(sparse_dot(&row, &v).unwrap(), 0.0);
    }

    #[test]
    fn sparse_dot_two_terms() {
        let row = SparseRow::new(vec![1, 2], vec![-1.0, 2.0]).unwrap();
        let v = ParamVector::from_slice(&[5.0, 1.0, 1.0]).unwrap();
        assert_eq!(sparse_dot(&row, &v).unwrap(), 1.0);
    }

    #[test]
    fn sparse_dot_out_of_range() {
        let row = SparseRow::new(vec![3], vec![1.0]).unwrap();
        let v = ParamVector::zeros(2);
        assert!(matches!(
            sparse_dot(&row, &v),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn row_rejects_unordered_indices() {
        assert!(SparseRow::new(vec![2, 1], vec![1.0, 1.0]).is_err());
        assert!(SparseRow::new(vec![1, 1], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn row_rejects_zero_value() {
        assert!(SparseRow::new(vec![0], vec![0.0]).is_err());
    }

    #[test]
    fn dataset_validates_labels_and_dim() {
        let rows = vec![SparseRow::new(vec![0], vec![1.0]).unwrap()];
        assert!(SparseDataset::new(rows.clone(), vec![2.0], 1).is_err());
        assert!(SparseDataset::new(rows.clone(), vec![1.0], 0).is_err());
        assert!(SparseDataset::new(rows, vec![1.0], 1).is_ok());
        assert!(SparseDataset::new(vec![], vec![], 1).is_err());
    }
}
