use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, psd_factor, spd_inverse, symmetrize, Matrix, Vector};

use super::mvn::{standard_normal_vector, SYMMETRY_TOL};

/// Normal-inverse-Wishart hyperparameters: `Σ ~ IW(ν₀, Ψ₀)` and
/// `μ | Σ ~ N(μ₀, Σ/κ₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NiwParams {
    pub mu0: Vector,
    pub kappa0: f64,
    pub nu0: f64,
    pub psi0: Matrix,
}

impl NiwParams {
    pub fn new(mu0: Vector, kappa0: f64, nu0: f64, psi0: Matrix) -> Result<Self> {
        let d = mu0.len();
        if psi0.nrows() != d || psi0.ncols() != d {
            return Err(Error::domain("NIW scale matrix does not match mean dimension"));
        }
        if !(kappa0 > 0.0) {
            return Err(Error::domain(format!("kappa0 must be positive, got {kappa0}")));
        }
        if !(nu0 > d as f64 - 1.0) {
            return Err(Error::domain(format!(
                "nu0 must exceed d - 1 = {}, got {nu0}",
                d as f64 - 1.0
            )));
        }
        check_symmetric(&psi0, SYMMETRY_TOL).map_err(|_| Error::domain("psi0 must be symmetric"))?;
        Ok(NiwParams {
            mu0,
            kappa0,
            nu0,
            psi0,
        })
    }

    /// `NIW(0, κ₀, ν₀, I)` of dimension `d`.
    pub fn isotropic(d: usize, kappa0: f64, nu0: f64) -> Result<Self> {
        Self::new(Vector::zeros(d), kappa0, nu0, Matrix::identity(d, d))
    }

    pub fn dim(&self) -> usize {
        self.mu0.len()
    }
}

/// Draws `Σ ~ IW(ν, Ψ)` by inverting a Bartlett-decomposed `W(ν, Ψ⁻¹)` draw.
pub fn sample_inverse_wishart<R: Rng + ?Sized>(nu: f64, psi: &Matrix, rng: &mut R) -> Result<Matrix> {
    let d = psi.nrows();
    if !(nu > d as f64 - 1.0) {
        return Err(Error::domain(format!("inverse-Wishart needs nu > d - 1, got {nu}")));
    }
    let scale_inv = spd_inverse(psi)?;
    let l = psd_factor(&scale_inv)?;
    let mut a = Matrix::zeros(d, d);
    for i in 0..d {
        let chi = ChiSquared::new(nu - i as f64)
            .map_err(|e| Error::numerical(format!("chi-square: {e}")))?;
        a[(i, i)] = chi.sample(rng).sqrt();
        for j in 0..i {
            a[(i, j)] = rng.sample(StandardNormal);
        }
    }
    // W = (LA)(LA)ᵀ, Σ = W⁻¹ = (LA)⁻ᵀ (LA)⁻¹
    let la = l * a;
    let la_inv = la
        .try_inverse()
        .ok_or_else(|| Error::numerical("singular Bartlett factor"))?;
    Ok(symmetrize(&(la_inv.transpose() * la_inv)))
}

/// Draws `(μ, Σ)` from a normal-inverse-Wishart.
pub fn sample_niw<R: Rng + ?Sized>(params: &NiwParams, rng: &mut R) -> Result<(Vector, Matrix)> {
    let d = params.dim();
    if !(params.nu0 > d as f64 - 1.0) {
        return Err(Error::domain("nu0 must exceed d - 1"));
    }
    let sigma = sample_inverse_wishart(params.nu0, &params.psi0, rng)?;
    let l = psd_factor(&sigma)?;
    let z = standard_normal_vector(d, rng);
    let mu = &params.mu0 + l * z / params.kappa0.sqrt();
    Ok((mu, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_hyperparameters() {
        assert!(NiwParams::isotropic(3, 1.0, 2.0).is_err());
        assert!(NiwParams::isotropic(3, 0.0, 5.0).is_err());
        assert!(NiwParams::isotropic(3, 1.0, 2.01).is_ok());
        let asym = Matrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 1.0]);
        assert!(NiwParams::new(Vector::zeros(2), 1.0, 4.0, asym).is_err());
    }

    #[test]
    fn draws_are_positive_definite() {
        let p = NiwParams::isotropic(4, 0.5, 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..2000 {
            let (_, s) = sample_niw(&p, &mut rng).unwrap();
            assert_eq!(s, s.transpose());
            assert!(s.clone().cholesky().is_some());
        }
    }

    #[test]
    fn inverse_wishart_mean() {
        // E[Σ] = Ψ / (ν − d − 1) = I / 7
        let p = NiwParams::isotropic(2, 1.0, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 100_000;
        let mut draws = Vec::with_capacity(n);
        for _ in 0..n {
            draws.push(sample_niw(&p, &mut rng).unwrap().1);
        }
        // Oracle: invert Wishart draws built as sums of outer products.
        let mut oracle = Vec::with_capacity(n);
        for _ in 0..n {
            let mut w = Matrix::zeros(2, 2);
            for _ in 0..10 {
                let z = standard_normal_vector(2, &mut rng);
                w += &z * z.transpose();
            }
            oracle.push(w.try_inverse().unwrap());
        }
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let target = if i == j { 1.0 / 7.0 } else { 0.0 };
            for sample in [&draws, &oracle] {
                let xs: Vec<f64> = sample.iter().map(|s| s[(i, j)]).collect();
                let m = xs.iter().sum::<f64>() / n as f64;
                let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n as f64 - 1.0);
                let se = (v / n as f64).sqrt();
                assert!((m - target).abs() < 3.0 * se, "({i},{j}): {m} vs {target}");
            }
        }
    }

    #[test]
    fn huge_kappa_pins_mean() {
        let mu0 = Vector::from_vec(vec![0.3, -1.2]);
        let p = NiwParams::new(mu0.clone(), 1e12, 5.0, Matrix::identity(2, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let (mu, _) = sample_niw(&p, &mut rng).unwrap();
            assert!((mu - &mu0).amax() < 1e-5);
        }
    }
}
