use std::f64::consts::LN_2;

use crate::data::PolyCylObservation;
use crate::dists::mvn::mvn_log_density;
use crate::dists::normal::std_normal_ln_pdf;
use crate::error::{Error, Result};
use crate::linalg::{submatrix, subvector, Vector};

use super::params::JpsnParams;

/// Log of the augmented joint density
///
/// `2^q φ_{2p+q}((w, y) | μ + (0, diag(λ) d), Σ) φ_q(d | 0, I) ∏ r_i`
///
/// for one record with radii `r` and skew latents `d`. Masked entries are
/// integrated out: a missing angle drops both of its `w` coordinates and its
/// radius, a missing linear value drops its `y` coordinate.
pub fn jpsn_aug_log_density(
    obs: &PolyCylObservation,
    r: &[f64],
    d: &[f64],
    params: &JpsnParams,
) -> Result<f64> {
    let (p, q) = (params.p(), params.q());
    if obs.p() != p || obs.q() != q || r.len() != p || d.len() != q {
        return Err(Error::domain("record or latents do not match (p, q)"));
    }
    if let Some(bad) = r.iter().chain(d).find(|&&x| !(x > 0.0)) {
        return Err(Error::domain(format!("latent variables must be positive, got {bad}")));
    }
    let mut idx = Vec::with_capacity(params.dim());
    let mut x = Vec::with_capacity(params.dim());
    let mut log_jac = 0.0;
    for i in 0..p {
        if obs.angle_missing[i] {
            continue;
        }
        let [c, s] = obs.angles[i].unit();
        idx.extend([2 * i, 2 * i + 1]);
        x.extend([r[i] * c, r[i] * s]);
        log_jac += r[i].ln();
    }
    for j in 0..q {
        if obs.linear_missing[j] {
            continue;
        }
        idx.push(2 * p + j);
        x.push(obs.linears[j]);
    }
    let mut mean = params.mu.clone();
    for j in 0..q {
        mean[2 * p + j] += params.lambda[j] * d[j];
    }
    let normal = mvn_log_density(
        &Vector::from_vec(x),
        &subvector(&mean, &idx),
        &submatrix(&params.sigma, &idx, &idx),
    )?;
    let half_normal: f64 = d.iter().map(|&v| LN_2 + std_normal_ln_pdf(v)).sum();
    Ok(normal + half_normal + log_jac)
}
