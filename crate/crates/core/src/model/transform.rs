use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::geometry::Angle;

/// Parameters of `Θ* = δ(Θ + ξ)` when `Θ ~ PN(μ, Σ)`: with `Δ = diag(1, δ)` and
/// `T` the rotation by `ξ`, `W* = Δ T W` gives `μ* = Δ T μ` and
/// `Σ* = Δ T Σ Tᵀ Δ`.
pub fn transform_pn_params(
    mu: &Vector2<f64>,
    sigma: &Matrix2<f64>,
    xi: Angle,
    delta: i32,
) -> Result<(Vector2<f64>, Matrix2<f64>)> {
    if delta != 1 && delta != -1 {
        return Err(Error::domain(format!("delta must be 1 or -1, got {delta}")));
    }
    let (s, c) = xi.value().sin_cos();
    let rot = Matrix2::new(c, -s, s, c);
    let m = Matrix2::new(1.0, 0.0, 0.0, delta as f64) * rot;
    let sigma_star = m * sigma * m.transpose();
    let sigma_star = (sigma_star + sigma_star.transpose()) * 0.5;
    Ok((m * mu, sigma_star))
}
