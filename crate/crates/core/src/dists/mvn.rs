use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, psd_factor, spd_cholesky, symmetrize, Matrix, Vector};

use super::normal::LN_SQRT_2PI;

/// Tolerance used when checking covariance symmetry.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Multivariate normal parameters with a cached lower-triangular factor.
#[derive(Debug, Clone, PartialEq)]
pub struct MvnParams {
    mean: Vector,
    cov: Matrix,
    factor: Matrix,
}

impl MvnParams {
    /// Rejects asymmetric covariances with a numerical error.
    pub fn new(mean: Vector, cov: Matrix) -> Result<Self> {
        if cov.nrows() != mean.len() {
            return Err(Error::domain("mean and covariance dimensions differ"));
        }
        check_symmetric(&cov, SYMMETRY_TOL)?;
        let factor = psd_factor(&cov)?;
        Ok(MvnParams { mean, cov, factor })
    }

    /// Replaces `cov` by `(cov + covᵀ)/2` before factoring.
    pub fn new_symmetrized(mean: Vector, cov: Matrix) -> Result<Self> {
        if !cov.is_square() {
            return Err(Error::domain("covariance must be square"));
        }
        Self::new(mean, symmetrize(&cov))
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &Vector {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix {
        &self.cov
    }

    pub fn factor(&self) -> &Matrix {
        &self.factor
    }
}

/// Draws `mean + L z` with `z` standard normal.
pub fn sample_mvn<R: Rng + ?Sized>(params: &MvnParams, rng: &mut R) -> Vector {
    let z = standard_normal_vector(params.dim(), rng);
    &params.mean + &params.factor * z
}

pub fn standard_normal_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Log density of `N(mean, cov)` at `x`. The covariance must be positive
/// definite.
pub fn mvn_log_density(x: &Vector, mean: &Vector, cov: &Matrix) -> Result<f64> {
    let n = x.len();
    if mean.len() != n || cov.nrows() != n {
        return Err(Error::domain("dimension mismatch in normal density"));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let chol = spd_cholesky(cov)?;
    let diff = x - mean;
    let z = chol
        .l_dirty()
        .solve_lower_triangular(&diff)
        .ok_or_else(|| Error::numerical("singular covariance"))?;
    let log_det: f64 = chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum();
    Ok(-0.5 * z.norm_squared() - log_det - n as f64 * LN_SQRT_2PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_covariance_returns_mean() {
        let mean = Vector::from_vec(vec![1.5, -2.0, 0.25]);
        let p = MvnParams::new(mean.clone(), Matrix::zeros(3, 3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert_eq!(sample_mvn(&p, &mut rng), mean);
        }
    }

    #[test]
    fn identity_covariance_moments() {
        let p = MvnParams::new(Vector::zeros(2), Matrix::identity(2, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let mut s = Matrix::zeros(2, 2);
        let mut m = Vector::zeros(2);
        for _ in 0..n {
            let x = sample_mvn(&p, &mut rng);
            s += &x * x.transpose();
            m += x;
        }
        m /= n as f64;
        let cov = s / n as f64 - &m * m.transpose();
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((cov[(i, j)] - target).abs() < 0.03, "{cov}");
            }
        }
    }

    #[test]
    fn asymmetric_covariance() {
        let cov = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.1, 1.0]);
        assert!(matches!(
            MvnParams::new(Vector::zeros(2), cov.clone()),
            Err(Error::Numerical(_))
        ));
        let p = MvnParams::new_symmetrized(Vector::zeros(2), cov).unwrap();
        assert!((p.cov()[(0, 1)] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn log_density_matches_bivariate_formula() {
        let cov = Matrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 0.5]);
        let mean = Vector::from_vec(vec![0.1, -0.2]);
        let x = Vector::from_vec(vec![1.0, 0.4]);
        let det: f64 = 2.0 * 0.5 - 0.09;
        let inv = Matrix::from_row_slice(2, 2, &[0.5, -0.3, -0.3, 2.0]) / det;
        let d = &x - &mean;
        let q = (d.transpose() * inv * &d)[(0, 0)];
        let expected = -0.5 * q - 0.5 * det.ln() - (2.0 * std::f64::consts::PI).ln();
        assert!((mvn_log_density(&x, &mean, &cov).unwrap() - expected).abs() < 1e-13);
    }
}
