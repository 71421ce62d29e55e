use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::geometry::Angle;

use super::normal::ln_radial_factor;

/// Log density of the univariate projected normal `PN(μ, Σ)` at `θ`.
///
/// With `u = (cos θ, sin θ)`, `A = uᵀΣ⁻¹u`, `B = uᵀΣ⁻¹μ`, `C = μᵀΣ⁻¹μ` and
/// `D = B/√A`, integrating the radius out of `r φ₂(r u | μ, Σ)` gives
///
/// `f(θ) = exp(−C/2) / (2π |Σ|^{1/2} A) · (1 + D Φ(D)/φ(D))`.
pub fn pn1_log_density(theta: Angle, mu: &Vector2<f64>, sigma: &Matrix2<f64>) -> Result<f64> {
    let pre = Pn1::new(mu, sigma)?;
    Ok(pre.log_density(theta))
}

/// Precomputed pieces of a univariate projected normal, for evaluating the
/// density on many angles.
#[derive(Debug, Clone, Copy)]
pub struct Pn1 {
    precision: Matrix2<f64>,
    prec_mu: Vector2<f64>,
    c: f64,
    half_log_det: f64,
}

impl Pn1 {
    pub fn new(mu: &Vector2<f64>, sigma: &Matrix2<f64>) -> Result<Self> {
        if (sigma[(0, 1)] - sigma[(1, 0)]).abs() > 1e-10 * sigma.diagonal().amax().max(1.0) {
            return Err(Error::numerical("PN covariance is not symmetric"));
        }
        let det = sigma.determinant();
        if !(det > 0.0) || !(sigma[(0, 0)] > 0.0) {
            return Err(Error::numerical("PN covariance is not positive definite"));
        }
        let precision = sigma
            .try_inverse()
            .ok_or_else(|| Error::numerical("singular PN covariance"))?;
        let prec_mu = precision * mu;
        Ok(Pn1 {
            precision,
            prec_mu,
            c: mu.dot(&prec_mu),
            half_log_det: 0.5 * det.ln(),
        })
    }

    pub fn log_density(&self, theta: Angle) -> f64 {
        let [cs, sn] = theta.unit();
        let u = Vector2::new(cs, sn);
        let a = u.dot(&(self.precision * u));
        let b = u.dot(&self.prec_mu);
        let d = b / a.sqrt();
        -0.5 * self.c - (2.0 * std::f64::consts::PI).ln() - self.half_log_det - a.ln()
            + ln_radial_factor(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        // composite Simpson
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn uniform_case() {
        let mu = Vector2::zeros();
        for scale in [1.0, 0.3, 7.0] {
            let sigma = Matrix2::identity() * scale;
            for k in 0..64 {
                let t = Angle::new(k as f64 * TAU / 64.0);
                let f = pn1_log_density(t, &mu, &sigma).unwrap().exp();
                assert!((f - 1.0 / TAU).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn integrates_to_one() {
        let cases = [
            (Vector2::new(2.0, 0.0), Matrix2::new(1.0, 0.0, 0.0, 1.0)),
            (Vector2::new(2.0, 0.0), Matrix2::new(1.0, 0.9, 0.9, 1.0)),
            (Vector2::new(-0.1, -0.2), Matrix2::new(1.0, -0.9, -0.9, 1.0)),
            (Vector2::new(5.0, -3.0), Matrix2::new(0.5, 0.1, 0.1, 0.2)),
        ];
        for (mu, sigma) in cases {
            let pn = Pn1::new(&mu, &sigma).unwrap();
            let total = integrate(|t| pn.log_density(Angle::new(t)).exp(), 0.0, TAU, 20_000);
            assert!((total - 1.0).abs() < 1e-6, "{total}");
        }
    }

    #[test]
    fn bimodal_example() {
        let mu = Vector2::new(-0.1, -0.2);
        let sigma = Matrix2::new(1.0, -0.9, -0.9, 1.0);
        let pn = Pn1::new(&mu, &sigma).unwrap();
        let n = 2048;
        let f: Vec<f64> = (0..n)
            .map(|k| pn.log_density(Angle::new(k as f64 * TAU / n as f64)))
            .collect();
        let maxima = (0..n)
            .filter(|&k| f[k] > f[(k + n - 1) % n] && f[k] > f[(k + 1) % n])
            .count();
        assert_eq!(maxima, 2);
    }

    #[test]
    fn scaling_both_coordinates_leaves_density_unchanged() {
        let mu = Vector2::new(0.7, -1.1);
        let sigma = Matrix2::new(1.3, 0.4, 0.4, 0.8);
        for c in [0.1, 2.0, 35.0] {
            for k in 0..50 {
                let t = Angle::new(0.1 + k as f64 * PI / 25.0);
                let a = pn1_log_density(t, &mu, &sigma).unwrap();
                let b = pn1_log_density(t, &(mu * c), &(sigma * (c * c))).unwrap();
                assert!((a.exp() - b.exp()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_covariance_is_rejected() {
        let sigma = Matrix2::new(1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            pn1_log_density(Angle::ZERO, &Vector2::zeros(), &sigma),
            Err(Error::Numerical(_))
        ));
    }
}
