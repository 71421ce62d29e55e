//! Full conditionals of the Gibbs sampler.

use std::collections::HashMap;

use rand::Rng;

use crate::data::{PolyCylDataset, PolyCylObservation};
use crate::dists::mvn::standard_normal_vector;
use crate::dists::niw::NiwParams;
use crate::dists::truncnorm::sample_trunc_normal_lower;
use crate::error::{Error, Result};
use crate::geometry::to_polar;
use crate::linalg::{complement, psd_factor, strict_cholesky, symmetrize, Conditioner, Matrix, Vector};
use crate::model::{JpsnParams, LatentState};

use super::prior::PriorSpec;

/// The stacked vector `(w_t, y_t)` of a record, reading masked entries at
/// their stored (imputed) values.
pub fn record_vector(obs: &PolyCylObservation, r: &[f64]) -> Vector {
    let (p, q) = (obs.p(), obs.q());
    let mut x = Vector::zeros(2 * p + q);
    for i in 0..p {
        let [c, s] = obs.angles[i].unit();
        x[2 * i] = r[i] * c;
        x[2 * i + 1] = r[i] * s;
    }
    for j in 0..q {
        x[2 * p + j] = obs.linears[j];
    }
    x
}

fn shifted_mean(params: &JpsnParams, d: &[f64]) -> Vector {
    let p = params.p();
    let mut m = params.mu.clone();
    for (j, dj) in d.iter().enumerate() {
        m[2 * p + j] += params.lambda[j] * dj;
    }
    m
}

fn spd_inverse_strict(m: &Matrix) -> Result<Matrix> {
    Ok(strict_cholesky(m)?.inverse())
}

/// NIW full conditional of `(μ, Σ)` given `η_t = (w_t, y_t) − (0, diag(λ) d_t)`.
/// Masked entries are read at their current imputed values.
pub fn niw_full_conditional(
    data: &PolyCylDataset,
    latents: &LatentState,
    lambda: &Vector,
    prior: &PriorSpec,
) -> NiwParams {
    let niw = &prior.niw;
    let t = data.len();
    if t == 0 {
        return niw.clone();
    }
    let (p, n) = (data.p(), niw.dim());
    let etas: Vec<Vector> = data
        .observations()
        .iter()
        .enumerate()
        .map(|(row, obs)| {
            let r: Vec<f64> = latents.r.row(row).iter().copied().collect();
            let mut x = record_vector(obs, &r);
            for j in 0..lambda.len() {
                x[2 * p + j] -= lambda[j] * latents.d[(row, j)];
            }
            x
        })
        .collect();
    let tf = t as f64;
    let mut bar = Vector::zeros(n);
    for e in &etas {
        bar += e;
    }
    bar /= tf;
    let mut scatter = Matrix::zeros(n, n);
    for e in &etas {
        let c = e - &bar;
        scatter.ger(1.0, &c, &c, 1.0);
    }
    let kappa = niw.kappa0 + tf;
    let dev = &bar - &niw.mu0;
    let psi = &niw.psi0 + scatter + (&dev * dev.transpose()) * (niw.kappa0 * tf / kappa);
    NiwParams {
        mu0: (&niw.mu0 * niw.kappa0 + &bar * tf) / kappa,
        kappa0: kappa,
        nu0: niw.nu0 + tf,
        psi0: symmetrize(&psi),
    }
}

/// Normal full conditional `(γ_post, Ω_post)` of `λ`.
///
/// With `H = Σ_t D_t Σ_{y|w}⁻¹ D_t` and `g = Σ_t D_t Σ_{y|w}⁻¹ (y_t − μ_{y_t|w_t})`,
/// `Ω_post = (Ω₀⁻¹ + H)⁻¹ = (I + Ω₀H)⁻¹ Ω₀` and
/// `γ_post = (I + Ω₀H)⁻¹ (γ₀ + Ω₀ g)`, so a singular `Ω₀` is allowed.
pub fn lambda_full_conditional(
    data: &PolyCylDataset,
    latents: &LatentState,
    mu: &Vector,
    sigma: &Matrix,
    prior: &PriorSpec,
) -> Result<(Vector, Matrix)> {
    let (p, q) = (data.p(), data.q());
    let n = 2 * p + q;
    let w_idx: Vec<usize> = (0..2 * p).collect();
    let y_idx: Vec<usize> = (2 * p..n).collect();
    let cond = Conditioner::new(sigma, &y_idx, &w_idx)?;
    let s_inv = spd_inverse_strict(&cond.cov)?;
    let mut h = Matrix::zeros(q, q);
    let mut g = Vector::zeros(q);
    for (row, obs) in data.observations().iter().enumerate() {
        let r: Vec<f64> = latents.r.row(row).iter().copied().collect();
        let x = record_vector(obs, &r);
        let resid = Vector::from_fn(q, |j, _| x[2 * p + j]) - cond.mean(mu, &x);
        let d = latents.d.row(row);
        for a in 0..q {
            for b in 0..q {
                h[(a, b)] += d[a] * s_inv[(a, b)] * d[b];
            }
            g[a] += d[a] * (s_inv.row(a) * &resid)[0];
        }
    }
    let omega0 = &prior.lambda_cov;
    let lhs = Matrix::identity(q, q) + omega0 * &h;
    let lu = lhs.lu();
    let gamma = lu
        .solve(&(&prior.lambda_mean + omega0 * g))
        .ok_or_else(|| Error::numerical("singular lambda posterior system"))?;
    let omega = lu
        .solve(omega0)
        .ok_or_else(|| Error::numerical("singular lambda posterior system"))?;
    Ok((gamma, symmetrize(&omega)))
}

/// Precomputed pieces of the `d_t` update for fixed `(μ, Σ, λ)`.
#[derive(Debug, Clone)]
pub struct DStep {
    p: usize,
    y_given_w: Conditioner,
    precision: Matrix,
    /// `diag(λ) Σ_{y|w}⁻¹`
    proj: Matrix,
}

impl DStep {
    pub fn new(params: &JpsnParams) -> Result<Self> {
        let (p, q) = (params.p(), params.q());
        let y_given_w = Conditioner::new(&params.sigma, &params.y_indices(), &params.w_indices())?;
        let s_inv = if q == 0 {
            Matrix::zeros(0, 0)
        } else {
            spd_inverse_strict(&y_given_w.cov)?
        };
        let lam = Matrix::from_diagonal(&params.lambda);
        let proj = &lam * &s_inv;
        let precision = &proj * &lam + Matrix::identity(q, q);
        Ok(DStep {
            p,
            y_given_w,
            precision,
            proj,
        })
    }

    /// One coordinate sweep of the positive-orthant truncated normal with
    /// precision `P = diag(λ) Σ_{y|w}⁻¹ diag(λ) + I` and linear term
    /// `b = diag(λ) Σ_{y|w}⁻¹ (y − μ_{y|w})`. `x` is the record vector.
    pub fn sample<R: Rng + ?Sized>(&self, mu: &Vector, x: &Vector, d: &mut [f64], rng: &mut R) {
        let q = d.len();
        if q == 0 {
            return;
        }
        let resid = Vector::from_fn(q, |j, _| x[2 * self.p + j]) - self.y_given_w.mean(mu, x);
        let b = &self.proj * resid;
        for j in 0..q {
            let pjj = self.precision[(j, j)];
            let mut lin = b[j];
            for k in 0..q {
                if k != j {
                    lin -= self.precision[(j, k)] * d[k];
                }
            }
            d[j] = sample_trunc_normal_lower(lin / pjj, 1.0 / pjj, 0.0, rng);
        }
    }
}

/// Updates `d_t` by one coordinate sub-scan of its positive-orthant truncated
/// normal full conditional, starting from `d_current`.
pub fn sample_d<R: Rng + ?Sized>(
    obs: &PolyCylObservation,
    r: &[f64],
    d_current: &[f64],
    params: &JpsnParams,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let step = DStep::new(params)?;
    let mut d = d_current.to_vec();
    step.sample(&params.mu, &record_vector(obs, r), &mut d, rng);
    Ok(d)
}

/// One slice-sampling transition for the density `∝ r exp(−A/2 (r − B/A)²)`
/// on `r > 0`.
pub fn slice_update_r<R: Rng + ?Sized>(r: f64, a: f64, b: f64, rng: &mut R) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("slice coefficient A must be positive, got {a}")));
    }
    if !(r > 0.0) || !b.is_finite() {
        return Err(Error::domain(format!("invalid slice state r = {r}, B = {b}")));
    }
    let m = b / a;
    // u in (0, 1]
    let u = 1.0 - rng.random::<f64>();
    let ln_v = -0.5 * a * (r - m) * (r - m) + u.ln();
    let s = (-2.0 * ln_v / a).sqrt();
    let rho1 = (m - s).max(0.0);
    let rho2 = m + s;
    let v_star: f64 = rng.random();
    let next = ((rho2 * rho2 - rho1 * rho1) * v_star + rho1 * rho1).sqrt();
    // v* = 0 with rho1 = 0 is the only way to hit zero
    Ok(if next > 0.0 { next } else { r })
}

/// Precomputed conditionals of each `w_ti` given the rest of the record.
#[derive(Debug, Clone)]
pub struct RStep {
    blocks: Vec<(Conditioner, Matrix)>,
}

impl RStep {
    pub fn new(params: &JpsnParams) -> Result<Self> {
        let n = params.dim();
        let blocks = (0..params.p())
            .map(|i| {
                let target = [2 * i, 2 * i + 1];
                let cond = Conditioner::new(&params.sigma, &target, &complement(n, &target))?;
                let q = spd_inverse_strict(&cond.cov)?;
                Ok((cond, q))
            })
            .collect::<Result<_>>()?;
        Ok(RStep { blocks })
    }

    /// `(A, B)` for block `i`, where `mean` already carries the `diag(λ) d_t`
    /// shift and `x` is the record vector.
    pub fn coefficients(&self, i: usize, u: [f64; 2], mean: &Vector, x: &Vector) -> (f64, f64) {
        let (cond, q) = &self.blocks[i];
        let mc = cond.mean(mean, x);
        let qu = [q[(0, 0)] * u[0] + q[(0, 1)] * u[1], q[(1, 0)] * u[0] + q[(1, 1)] * u[1]];
        (
            u[0] * qu[0] + u[1] * qu[1],
            qu[0] * mc[0] + qu[1] * mc[1],
        )
    }
}

/// `A_ti = uᵀ Q u` and `B_ti = uᵀ Q m` where `Q` is the inverse covariance
/// and `m` the mean of `w_ti` given the other blocks and `y_t`.
pub fn compute_r_coefficients(
    obs: &PolyCylObservation,
    i: usize,
    params: &JpsnParams,
    d: &[f64],
    r: &[f64],
) -> Result<(f64, f64)> {
    if i >= params.p() {
        return Err(Error::domain(format!("block {i} out of range")));
    }
    let step = RStep::new(params)?;
    Ok(step.coefficients(
        i,
        obs.angles[i].unit(),
        &shifted_mean(params, d),
        &record_vector(obs, r),
    ))
}

/// Draws the masked coordinates of records given the observed ones, caching
/// the conditioning per missing pattern.
#[derive(Debug)]
pub struct Imputer<'a> {
    params: &'a JpsnParams,
    cache: HashMap<Vec<usize>, (Conditioner, Matrix)>,
}

impl<'a> Imputer<'a> {
    pub fn new(params: &'a JpsnParams) -> Self {
        Imputer {
            params,
            cache: HashMap::new(),
        }
    }

    /// Replaces masked entries of `obs` (and the radii of masked angles) with
    /// a joint draw from the Gaussian conditional of `(w_t, y_t) | d_t`.
    pub fn impute<R: Rng + ?Sized>(
        &mut self,
        obs: &mut PolyCylObservation,
        r: &mut [f64],
        d: &[f64],
        rng: &mut R,
    ) -> Result<()> {
        if !obs.has_missing() {
            return Ok(());
        }
        let params = self.params;
        let (p, n) = (params.p(), params.dim());
        let mut missing = Vec::new();
        for i in 0..p {
            if obs.angle_missing[i] {
                missing.extend([2 * i, 2 * i + 1]);
            }
        }
        for j in 0..params.q() {
            if obs.linear_missing[j] {
                missing.push(2 * p + j);
            }
        }
        if !self.cache.contains_key(&missing) {
            let cond = Conditioner::new(&params.sigma, &missing, &complement(n, &missing))?;
            let factor = psd_factor(&cond.cov)?;
            self.cache.insert(missing.clone(), (cond, factor));
        }
        let (cond, factor) = &self.cache[&missing];
        let mean = cond.mean(&shifted_mean(params, d), &record_vector(obs, r));
        let mut tries = 0;
        let draw = loop {
            let z = &mean + factor * standard_normal_vector(missing.len(), rng);
            let ok = (0..p).filter(|&i| obs.angle_missing[i]).all(|i| {
                let k = missing.iter().position(|&m| m == 2 * i).unwrap();
                z[k] != 0.0 || z[k + 1] != 0.0
            });
            if ok {
                break z;
            }
            tries += 1;
            if tries > 100 {
                return Err(Error::numerical("imputed planar point stuck at the origin"));
            }
        };
        for (k, &coord) in missing.iter().enumerate() {
            if coord < 2 * p {
                if coord % 2 == 0 {
                    let (theta, radius) = to_polar(draw[k], draw[k + 1])?;
                    obs.angles[coord / 2] = theta;
                    r[coord / 2] = radius;
                }
            } else {
                obs.linears[coord - 2 * p] = draw[k];
            }
        }
        Ok(())
    }
}

/// Completes one record: masked angles (with their radii) and masked linear
/// values are drawn from the Gaussian conditional of `(w, y) | d`. Masks are
/// kept, only the stored values change.
pub fn impute_missing<R: Rng + ?Sized>(
    obs: &PolyCylObservation,
    r: &[f64],
    d: &[f64],
    params: &JpsnParams,
    rng: &mut R,
) -> Result<(PolyCylObservation, Vec<f64>)> {
    let mut out = obs.clone();
    let mut radii = r.to_vec();
    Imputer::new(params).impute(&mut out, &mut radii, d, rng)?;
    Ok((out, radii))
}
