use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

use super::DenseMatrix;

/// The one generator used repository-wide. ChaCha8 is counter-based, so
/// an identical seed yields an identical stream on every platform.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Deterministic random source for minibatch sampling and Gaussian
/// sketches.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
    seed: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        RNG_ALGORITHM
    }

    /// Draws `batch` distinct indices from `0..n` uniformly without
    /// replacement (partial Fisher-Yates), returned in ascending order.
    pub fn sample_minibatch(&mut self, n: usize, batch: usize) -> Result<Vec<usize>> {
        if batch == 0 || batch > n {
            return Err(Error::Argument(format!(
                "minibatch size must satisfy 1 <= batch <= n, got batch={batch}, n={n}"
            )));
        }
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..batch {
            let j = self.rng.random_range(i..n);
            idx.swap(i, j);
        }
        idx.truncate(batch);
        idx.sort_unstable();
        Ok(idx)
    }

    /// d-by-r matrix of independent standard-normal draws, filled
    /// column by column.
    pub fn gaussian_matrix(&mut self, d: usize, r: usize) -> Result<DenseMatrix> {
        if r == 0 || r > d {
            return Err(Error::Argument(format!(
                "sketch width must satisfy 1 <= r <= d, got r={r}, d={d}"
            )));
        }
        let mut m = DenseMatrix::zeros(d, r);
        for j in 0..r {
            for v in m.col_mut(j) {
                *v = StandardNormal.sample(&mut self.rng);
            }
        }
        Ok(m)
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform draw from `0..n`.
    pub fn uniform_index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform01(&mut self) -> f64 {
        self.rng.random_range(0.0..1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_batch_is_forced() {
        let mut rng = RandomSource::new(17);
        assert_eq!(
            rng.sample_minibatch(5, 5).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn singleton_is_forced() {
        let mut rng = RandomSource::new(17);
        assert_eq!(rng.sample_minibatch(1, 1).unwrap(), vec![0]);
    }

    #[test]
    fn minibatch_deterministic_given_seed() {
        let mut a = RandomSource::new(99);
        let mut b = RandomSource::new(99);
        for _ in 0..10 {
            assert_eq!(
                a.sample_minibatch(100, 10).unwrap(),
                b.sample_minibatch(100, 10).unwrap()
            );
        }
    }

    #[test]
    fn minibatch_indices_distinct_and_in_range() {
        let mut rng = RandomSource::new(5);
        let s = rng.sample_minibatch(30, 7).unwrap();
        assert_eq!(s.len(), 7);
        for w in s.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(*s.last().unwrap() < 30);
    }

    #[test]
    fn batch_larger_than_n_rejected() {
        let mut rng = RandomSource::new(0);
        assert!(rng.sample_minibatch(3, 4).is_err());
        assert!(rng.sample_minibatch(3, 0).is_err());
    }

    #[test]
    fn gaussian_matrix_deterministic() {
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        assert_eq!(
            a.gaussian_matrix(4, 2).unwrap(),
            b.gaussian_matrix(4, 2).unwrap()
        );
    }

    #[test]
    fn gaussian_matrix_rejects_wide() {
        let mut rng = RandomSource::new(0);
        assert!(rng.gaussian_matrix(2, 3).is_err());
    }

    #[test]
    fn gaussian_sample_mean_near_zero() {
        // >= 1e5 draws, |mean| < 0.01
        let mut rng = RandomSource::new(2024);
        let m = rng.gaussian_matrix(1000, 100).unwrap();
        let mean: f64 = m.as_slice().iter().sum::<f64>() / (1000.0 * 100.0);
        assert!(mean.abs() < 0.01, "sample mean {mean}");
        assert!(m.is_finite());
    }

    #[test]
    fn minibatch_coverage_frequencies() {
        // 1e5 draws, n=10, batch=3: empirical per-index frequency within
        // 3 standard errors of batch/n.
        let mut rng = RandomSource::new(31);
        let draws = 100_000;
        let mut counts = [0usize; 10];
        for _ in 0..draws {
            for i in rng.sample_minibatch(10, 3).unwrap() {
                counts[i] += 1;
            }
        }
        let p = 0.3;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        for (i, c) in counts.iter().enumerate() {
            let freq = *c as f64 / draws as f64;
            assert!(
                (freq - p).abs() <= 3.0 * se,
                "index {i}: freq {freq} vs expected {p} +- {}",
                3.0 * se
            );
        }
    }
}
