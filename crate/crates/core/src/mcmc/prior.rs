use crate::dists::niw::NiwParams;
use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, psd_factor, Matrix, Vector};

/// Priors for the unconstrained parameters: `(μ, Σ) ~ NIW` and
/// `λ ~ N(γ₀, Ω₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorSpec {
    pub niw: NiwParams,
    pub lambda_mean: Vector,
    pub lambda_cov: Matrix,
}

impl PriorSpec {
    pub fn new(niw: NiwParams, lambda_mean: Vector, lambda_cov: Matrix) -> Result<Self> {
        let q = lambda_mean.len();
        if lambda_cov.nrows() != q || lambda_cov.ncols() != q {
            return Err(Error::domain("lambda prior covariance does not match its mean"));
        }
        check_symmetric(&lambda_cov, 1e-10)
            .map_err(|_| Error::domain("lambda prior covariance must be symmetric"))?;
        psd_factor(&lambda_cov)
            .map_err(|_| Error::domain("lambda prior covariance must be non-negative definite"))?;
        Ok(PriorSpec {
            niw,
            lambda_mean,
            lambda_cov,
        })
    }

    /// Weakly informative defaults: `NIW(0, 0.001, 2p+q+10, I)` and
    /// `N(0, 100 I)`.
    pub fn weak(p: usize, q: usize) -> Self {
        let n = 2 * p + q;
        PriorSpec {
            niw: NiwParams::isotropic(n, 0.001, (n + 10) as f64).expect("valid default NIW"),
            lambda_mean: Vector::zeros(q),
            lambda_cov: Matrix::identity(q, q) * 100.0,
        }
    }

    pub fn check_dims(&self, p: usize, q: usize) -> Result<()> {
        if self.niw.dim() != 2 * p + q || self.lambda_mean.len() != q {
            return Err(Error::domain(format!(
                "prior dimensions ({}, {}) do not match p = {p}, q = {q}",
                self.niw.dim(),
                self.lambda_mean.len()
            )));
        }
        Ok(())
    }
}
