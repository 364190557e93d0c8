use crate::{Error, Result};

/// Dense vector of model coordinates, fixed length, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    values: Vec<f64>,
}

impl ParamVector {
    /// Wraps a value buffer, rejecting NaN/Inf entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "parameter vector",
            });
        }
        Ok(Self { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            values: vec![0.0; dim],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.values.clone()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    /// Euclidean norm, accumulated left to right.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Sum of absolute values, accumulated left to right.
    pub fn norm_l1(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// Number of coordinates that are not exactly zero.
    pub fn nnz(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }

    /// Returns `self + coeff * other`.
    pub fn add_scaled(&self, coeff: f64, other: &ParamVector) -> Result<ParamVector> {
        check_len(self, other)?;
        ParamVector::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + coeff * b)
                .collect(),
        )
    }

    /// Returns `self - other`.
    pub fn sub(&self, other: &ParamVector) -> Result<ParamVector> {
        self.add_scaled(-1.0, other)
    }

    /// Returns `coeff * self`.
    pub fn scale(&self, coeff: f64) -> Result<ParamVector> {
        ParamVector::new(self.values.iter().map(|a| coeff * a).collect())
    }

    /// In-place `self += other`.
    pub fn accumulate(&mut self, other: &ParamVector) -> Result<()> {
        check_len(self, other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "parameter vector",
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for ParamVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl AsRef<[f64]> for ParamVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

fn check_len(u: &ParamVector, v: &ParamVector) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(())
}

/// Inner product, accumulated sequentially over indices.
pub fn dot(u: &ParamVector, v: &ParamVector) -> Result<f64> {
    check_len(u, v)?;
    Ok(u.values
        .iter()
        .zip(&v.values)
        .map(|(a, b)| a * b)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_direct_arithmetic() {
        let u = ParamVector::from_slice(&[1.0, 2.0]).unwrap();
        let v = ParamVector::from_slice(&[3.0, 4.0]).unwrap();
        assert_eq!(dot(&u, &v).unwrap(), 11.0);
    }

    #[test]
    fn dot_zero_annihilates() {
        let u = ParamVector::from_slice(&[5.0, -2.5, 7.0]).unwrap();
        let z = ParamVector::zeros(3);
        assert_eq!(dot(&u, &z).unwrap(), 0.0);
    }

    #[test]
    fn dot_fractional() {
        let u = ParamVector::from_slice(&[0.5]).unwrap();
        assert_eq!(dot(&u, &u).unwrap(), 0.25);
    }

    #[test]
    fn dot_length_mismatch() {
        let u = ParamVector::zeros(2);
        let v = ParamVector::zeros(3);
        assert!(matches!(dot(&u, &v), Err(Error::Dimension { .. })));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(ParamVector::from_slice(&[1.0, f64::NAN]).is_err());
        assert!(ParamVector::from_slice(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn nnz_counts_exact_zeros() {
        let u = ParamVector::from_slice(&[0.0, 1e-300, -0.0, 2.0]).unwrap();
        assert_eq!(u.nnz(), 2);
    }

    #[test]
    fn add_scaled_overflow_is_caught() {
        let u = ParamVector::from_slice(&[f64::MAX]).unwrap();
        let v = ParamVector::from_slice(&[f64::MAX]).unwrap();
        assert!(matches!(
            u.add_scaled(1.0, &v),
            Err(Error::NonFinite { .. })
        ));
    }
}
