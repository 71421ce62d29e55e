use crate::error::{Error, Result};
use crate::geometry::Angle;
use crate::linalg::{Conditioner, Matrix, Vector};

use super::params::JpsnParams;

/// Skew-normal parameters `(location, scale, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SsnParams {
    pub location: Vector,
    pub scale: Matrix,
    pub lambda: Vector,
}

/// Projected-normal parameters of `Θ | y, d`: the Gaussian conditional of `W`
/// given `Y = y` with the skew shift `diag(λ) d` removed from the mean.
///
/// Mean `μ_w + Σ_wy Σ_y⁻¹ (y − μ_y − diag(λ) d)`, covariance
/// `Σ_w − Σ_wy Σ_y⁻¹ Σ_wyᵀ`.
pub fn conditional_circular_params(
    params: &JpsnParams,
    y: &Vector,
    d: &Vector,
) -> Result<(Vector, Matrix)> {
    let (p, q) = (params.p(), params.q());
    if y.len() != q || d.len() != q {
        return Err(Error::domain("y and d must have length q"));
    }
    let cond = Conditioner::new(&params.sigma, &params.w_indices(), &params.y_indices())?;
    let mut mean = params.mu.clone();
    for j in 0..q {
        mean[2 * p + j] += params.lambda[j] * d[j];
    }
    let mut values = Vector::zeros(params.dim());
    for j in 0..q {
        values[2 * p + j] = y[j];
    }
    Ok((cond.mean(&mean, &values), cond.cov))
}

/// Skew-normal parameters of `Y | θ, r` with the skew latent left
/// unconditioned: location `μ_y + Σ_wyᵀ Σ_w⁻¹ (w − μ_w)`, scale
/// `Σ_y − Σ_wyᵀ Σ_w⁻¹ Σ_wy` and skewness `λ`.
pub fn conditional_linear_params(
    params: &JpsnParams,
    theta: &[Angle],
    r: &[f64],
) -> Result<SsnParams> {
    let p = params.p();
    if theta.len() != p || r.len() != p {
        return Err(Error::domain("theta and r must have length p"));
    }
    if r.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::domain("radii must be positive"));
    }
    let cond = Conditioner::new(&params.sigma, &params.y_indices(), &params.w_indices())?;
    let mut values = Vector::zeros(params.dim());
    for i in 0..p {
        let [c, s] = theta[i].unit();
        values[2 * i] = r[i] * c;
        values[2 * i + 1] = r[i] * s;
    }
    Ok(SsnParams {
        location: cond.mean(&params.mu, &values),
        scale: cond.cov,
        lambda: params.lambda.clone(),
    })
}

/// Mean `μ_y + λ √(2/π)` and covariance `Σ_y + (1 − 2/π) diag(λ)²` of the
/// linear part.
pub fn ssn_moments(params: &JpsnParams) -> (Vector, Matrix) {
    let k = 2.0 / std::f64::consts::PI;
    let mean = params.mu_y() + &params.lambda * k.sqrt();
    let mut cov = params.sigma_y();
    for j in 0..params.q() {
        cov[(j, j)] += (1.0 - k) * params.lambda[j] * params.lambda[j];
    }
    (mean, cov)
}
