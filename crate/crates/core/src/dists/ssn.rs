use rand::Rng;
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::linalg::{spd_inverse, symmetrize, Matrix, Vector};

use super::mvn::mvn_log_density;
use super::mvn_cdf::mvn_cdf_mc;
use super::normal::std_normal_cdf;

/// Value of the skew-normal log density together with the Monte Carlo
/// standard error of its `Φ_q` factor (zero when `q = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsnLogDensity {
    pub log_density: f64,
    pub cdf_estimate: f64,
    pub cdf_std_error: f64,
}

/// Log density of the skew-normal with diagonal skewness `diag(λ)`:
///
/// `f(y) = 2^q φ_q(y | μ, Υ) Φ_q(Λ Υ⁻¹ (y − μ) | 0, Γ)`, with `Υ = Σ + ΛΛ` and
/// `Γ = I − Λ Υ⁻¹ Λ`.
///
/// `Φ_q` is exact for `q = 1` and estimated with `mc_pairs` antithetic pairs
/// otherwise.
pub fn ssn_log_density<R: Rng + ?Sized>(
    y: &Vector,
    mu: &Vector,
    sigma: &Matrix,
    lambda: &Vector,
    mc_pairs: usize,
    rng: &mut R,
) -> Result<SsnLogDensity> {
    let q = y.len();
    if mu.len() != q || sigma.nrows() != q || sigma.ncols() != q || lambda.len() != q {
        return Err(Error::domain(format!(
            "skew-normal dimension mismatch: y {q}, mu {}, sigma {}x{}, lambda {}",
            mu.len(),
            sigma.nrows(),
            sigma.ncols(),
            lambda.len()
        )));
    }
    let big_lambda = Matrix::from_diagonal(lambda);
    let upsilon = symmetrize(&(sigma + &big_lambda * &big_lambda));
    let ups_inv = spd_inverse(&upsilon)?;
    let gamma = symmetrize(&(Matrix::identity(q, q) - &big_lambda * &ups_inv * &big_lambda));
    let arg = &big_lambda * &ups_inv * (y - mu);
    let log_phi = mvn_log_density(y, mu, &upsilon)?;

    let (cdf, se) = if q == 1 {
        let g = gamma[(0, 0)];
        if !(g > 0.0) {
            return Err(Error::numerical("degenerate skew-normal scale"));
        }
        (std_normal_cdf(arg[0] / g.sqrt()), 0.0)
    } else {
        let sd = gamma.diagonal().map(|v| v.sqrt());
        if sd.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::numerical("degenerate skew-normal scale"));
        }
        let corr = Matrix::from_fn(q, q, |i, j| {
            if i == j {
                1.0
            } else {
                gamma[(i, j)] / (sd[i] * sd[j])
            }
        });
        let upper = arg.component_div(&sd);
        mvn_cdf_mc(&upper, &corr, mc_pairs, rng)?
    };
    Ok(SsnLogDensity {
        log_density: q as f64 * LN_2 + log_phi + cdf.ln(),
        cdf_estimate: cdf,
        cdf_std_error: se,
    })
}

/// `2 φ(y | μ, σ² + λ²) Φ(λ (y − μ) / (σ √(σ² + λ²)))`, the exact `q = 1` case.
pub fn ssn1_log_density(y: f64, mu: f64, var: f64, lambda: f64) -> f64 {
    let ups = var + lambda * lambda;
    let z = y - mu;
    let arg = lambda * z / (var.sqrt() * ups.sqrt());
    LN_2 + super::normal::normal_ln_pdf(y, mu, ups) + std_normal_cdf(arg).ln()
}
