use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

use super::params::JpsnParams;

/// Per-angle radial scales `c_i > 0` of the identification transform.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix(pub Vec<f64>);

impl CMatrix {
    pub fn ones(p: usize) -> Self {
        CMatrix(vec![1.0; p])
    }

    pub fn p(&self) -> usize {
        self.0.len()
    }

    /// Diagonal of the full `(2p+q)`-dimensional scaling matrix.
    pub fn diagonal(&self, q: usize) -> Vector {
        let p = self.p();
        Vector::from_fn(2 * p + q, |k, _| if k < 2 * p { self.0[k / 2] } else { 1.0 })
    }

    /// `(C μ̃, C Σ̃ C)`.
    pub fn apply(&self, mu_tilde: &Vector, sigma_tilde: &Matrix) -> (Vector, Matrix) {
        let q = mu_tilde.len() - 2 * self.p();
        let c = self.diagonal(q);
        let mu = mu_tilde.component_mul(&c);
        let sigma = Matrix::from_fn(c.len(), c.len(), |i, j| sigma_tilde[(i, j)] * c[i] * c[j]);
        (mu, sigma)
    }
}

/// Maps unconstrained `(μ, Σ)` to the identified `(μ̃, Σ̃)` with
/// `c_i = √[Σ]_{w_i2, w_i2}`, `μ̃ = C⁻¹ μ` and `Σ̃ = C⁻¹ Σ C⁻¹`.
pub fn identify_mu_sigma(p: usize, mu: &Vector, sigma: &Matrix) -> Result<(Vector, Matrix, CMatrix)> {
    let n = mu.len();
    if n < 2 * p || sigma.nrows() != n || sigma.ncols() != n {
        return Err(Error::domain("identify: dimension mismatch"));
    }
    let mut c = Vec::with_capacity(p);
    for i in 0..p {
        let v = sigma[(2 * i + 1, 2 * i + 1)];
        if !(v > 0.0) {
            return Err(Error::domain(format!(
                "identify: variance of w_{}2 must be positive, got {v}",
                i + 1
            )));
        }
        c.push(v.sqrt());
    }
    let c = CMatrix(c);
    let inv = c.diagonal(n - 2 * p).map(|x| 1.0 / x);
    let mu_t = mu.component_mul(&inv);
    let mut sigma_t = Matrix::from_fn(n, n, |i, j| sigma[(i, j)] * inv[i] * inv[j]);
    for i in 0..p {
        sigma_t[(2 * i + 1, 2 * i + 1)] = 1.0;
    }
    Ok((mu_t, sigma_t, c))
}

/// Identified version of `params` (λ and the linear blocks are untouched).
pub fn identify(params: &JpsnParams) -> Result<(JpsnParams, CMatrix)> {
    let (mu, sigma, c) = identify_mu_sigma(params.p(), &params.mu, &params.sigma)?;
    Ok((
        JpsnParams::from_parts_unchecked(
            params.p(),
            params.q(),
            mu,
            sigma,
            params.lambda.clone(),
            true,
        ),
        c,
    ))
}
