use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, psd_factor, Matrix, Vector};

use super::mvn::standard_normal_vector;

/// Default number of antithetic pairs for [`mvn_cdf_mc`].
pub const DEFAULT_MC_PAIRS: usize = 4096;

/// Monte Carlo estimate of `P(Z ≤ upper)` for `Z ~ N(0, corr)`.
///
/// Uses `n` antithetic pairs `(Lz, −Lz)`; the reported standard error is the
/// plug-in standard deviation of the pair means over `√n`, which is at most
/// `1/(2√n)`.
pub fn mvn_cdf_mc<R: Rng + ?Sized>(
    upper: &Vector,
    corr: &Matrix,
    n: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let q = upper.len();
    if corr.nrows() != q || corr.ncols() != q {
        return Err(Error::domain("correlation matrix does not match bound dimension"));
    }
    if n == 0 {
        return Err(Error::domain("need at least one Monte Carlo pair"));
    }
    check_symmetric(corr, 1e-10)?;
    if corr.diagonal().iter().any(|&d| (d - 1.0).abs() > 1e-10) {
        return Err(Error::numerical("correlation matrix needs a unit diagonal"));
    }
    let l = psd_factor(corr)?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let x = &l * standard_normal_vector(q, rng);
        let plus = x.iter().zip(upper.iter()).all(|(a, b)| *a <= *b) as u8 as f64;
        let minus = x.iter().zip(upper.iter()).all(|(a, b)| -*a <= *b) as u8 as f64;
        let pair = 0.5 * (plus + minus);
        sum += pair;
        sum_sq += pair * pair;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean).max(0.0);
    Ok((mean, (var / nf).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::normal::std_normal_cdf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_dimensional_reduces_to_scalar_cdf() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &u in &[-1.5, -0.2, 0.0, 0.8, 2.0] {
            let (est, se) =
                mvn_cdf_mc(&Vector::from_vec(vec![u]), &Matrix::identity(1, 1), 4096, &mut rng)
                    .unwrap();
            assert!(se <= 0.5 / 4096f64.sqrt());
            assert!((est - std_normal_cdf(u)).abs() <= 3.0 * se + 1e-12, "{u}");
        }
    }

    #[test]
    fn far_bounds_give_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (est, _) = mvn_cdf_mc(
            &Vector::from_vec(vec![10.0, 10.0]),
            &Matrix::identity(2, 2),
            4096,
            &mut rng,
        )
        .unwrap();
        assert!((est - 1.0).abs() < 1e-6);
    }

    #[test]
    fn independence_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let upper = Vector::from_vec(vec![0.3, -0.4, 1.1]);
        let (est, se) = mvn_cdf_mc(&upper, &Matrix::identity(3, 3), 20_000, &mut rng).unwrap();
        let exact: f64 = upper.iter().map(|&u| std_normal_cdf(u)).product();
        assert!((est - exact).abs() < 3.0 * se, "{est} vs {exact}");
    }

    #[test]
    fn invalid_correlation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let bad = Matrix::from_row_slice(2, 2, &[1.0, 1.5, 1.5, 1.0]);
        assert!(matches!(
            mvn_cdf_mc(&Vector::zeros(2), &bad, 10, &mut rng),
            Err(Error::Numerical(_))
        ));
        let not_unit = Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!(mvn_cdf_mc(&Vector::zeros(2), &not_unit, 10, &mut rng).is_err());
    }
}
