use rand::Rng;

use crate::data::{PolyCylDataset, PolyCylObservation};
use crate::dists::mvn::standard_normal_vector;
use crate::dists::truncnorm::sample_half_normal;
use crate::error::Result;
use crate::geometry::{to_polar, Angle};
use crate::linalg::{psd_factor, Matrix, Vector};

use super::params::JpsnParams;

/// Latent radii `r` (`T × p`) and skew latents `d` (`T × q`), all positive.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentState {
    pub r: Matrix,
    pub d: Matrix,
}

impl LatentState {
    pub fn new(t: usize, p: usize, q: usize) -> Self {
        LatentState {
            r: Matrix::from_element(t, p, 1.0),
            d: Matrix::from_element(t, q, (2.0 / std::f64::consts::PI).sqrt()),
        }
    }

    /// The planar points `w_t = r_ti (cos θ_ti, sin θ_ti)` as a `T × 2p`
    /// matrix.
    pub fn w(&self, data: &PolyCylDataset) -> Matrix {
        let p = data.p();
        Matrix::from_fn(data.len(), 2 * p, |t, k| {
            let [c, s] = data.observations()[t].angles[k / 2].unit();
            self.r[(t, k / 2)] * if k % 2 == 0 { c } else { s }
        })
    }

    pub fn all_positive(&self) -> bool {
        self.r.iter().chain(self.d.iter()).all(|&x| x > 0.0)
    }
}

/// Draws `T` observations: `d_t` half-normal, `(w_t, y_t) ~ N(μ + (0, Λ d_t), Σ)`,
/// then each `w_ti` is mapped to its angle and radius.
pub fn simulate_jpsn<R: Rng + ?Sized>(
    params: &JpsnParams,
    t: usize,
    rng: &mut R,
) -> Result<(PolyCylDataset, LatentState)> {
    let (p, q, n) = (params.p(), params.q(), params.dim());
    let l = psd_factor(&params.sigma)?;
    let mut latents = LatentState {
        r: Matrix::zeros(t, p),
        d: Matrix::zeros(t, q),
    };
    let mut observations = Vec::with_capacity(t);
    for row in 0..t {
        let d: Vector = Vector::from_fn(q, |_, _| sample_half_normal(rng));
        let (angles, radii, x) = loop {
            let mut x = &params.mu + &l * standard_normal_vector(n, rng);
            for j in 0..q {
                x[2 * p + j] += params.lambda[j] * d[j];
            }
            let polar: Option<Vec<(Angle, f64)>> =
                (0..p).map(|i| to_polar(x[2 * i], x[2 * i + 1]).ok()).collect();
            // w_i = 0 has probability zero unless Σ_w is singular; redraw.
            if let Some(polar) = polar {
                let (a, r): (Vec<Angle>, Vec<f64>) = polar.into_iter().unzip();
                break (a, r, x);
            }
        };
        for i in 0..p {
            latents.r[(row, i)] = radii[i];
        }
        for j in 0..q {
            latents.d[(row, j)] = d[j];
        }
        let linears = (0..q).map(|j| x[2 * p + j]).collect();
        observations.push(PolyCylObservation::complete(angles, linears));
    }
    Ok((PolyCylDataset::new(p, q, observations)?, latents))
}
