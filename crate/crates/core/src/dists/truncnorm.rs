use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::normal::{std_normal_inv_cdf, std_normal_sf};

/// Standardized truncation points above this use exponential rejection.
const TAIL_SWITCH: f64 = 5.0;

/// Exact draw from `N(mean, var)` conditioned on `(lower, ∞)`.
///
/// `lower = -∞` gives an ordinary normal draw. Moderate truncation uses the
/// inverse CDF of the upper tail; truncation beyond `mean + 5σ` uses Robert's
/// translated-exponential rejection sampler, which accepts with probability
/// close to one deep in the tail.
pub fn sample_trunc_normal_lower<R: Rng + ?Sized>(
    mean: f64,
    var: f64,
    lower: f64,
    rng: &mut R,
) -> f64 {
    debug_assert!(var > 0.0);
    let sd = var.sqrt();
    if lower == f64::NEG_INFINITY {
        return mean + sd * rng.sample::<f64, _>(StandardNormal);
    }
    let a = (lower - mean) / sd;
    loop {
        let z = standard_tail(a, rng);
        let x = mean + sd * z;
        if x > lower {
            return x;
        }
    }
}

/// Standard normal conditioned on `(a, ∞)`.
fn standard_tail<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    if a <= TAIL_SWITCH {
        let tail = std_normal_sf(a);
        // u in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        let z = -std_normal_inv_cdf(u * tail);
        // rounding in the inverse can land on or just below the bound
        if z > a {
            z
        } else {
            a + f64::EPSILON * a.abs().max(1.0)
        }
    } else {
        let rate = 0.5 * (a + (a * a + 4.0).sqrt());
        loop {
            let e: f64 = rng.sample(Exp1);
            let z = a + e / rate;
            let u: f64 = rng.random();
            if u <= (-0.5 * (z - rate) * (z - rate)).exp() {
                return z;
            }
        }
    }
}

/// Standard half-normal draw `|Z|`.
pub fn sample_half_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let z: f64 = rng.sample::<f64, _>(StandardNormal).abs();
        if z > 0.0 {
            return z;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    #[test]
    fn half_normal_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| sample_trunc_normal_lower(0.0, 1.0, 0.0, &mut rng))
            .collect();
        let (m, se) = mean_and_se(&xs);
        let target = (2.0 / std::f64::consts::PI).sqrt();
        assert!((m - target).abs() < 3.0 * se, "{m} vs {target}");

        // Rejection-sampling oracle: keep positive standard normal draws.
        let mut oracle = Vec::new();
        while oracle.len() < 100_000 {
            let z: f64 = rng.sample(StandardNormal);
            if z > 0.0 {
                oracle.push(z);
            }
        }
        let (mo, seo) = mean_and_se(&oracle);
        assert!((m - mo).abs() < 3.0 * (se * se + seo * seo).sqrt());
    }

    #[test]
    fn unbounded_is_plain_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| sample_trunc_normal_lower(2.0, 4.0, f64::NEG_INFINITY, &mut rng))
            .collect();
        let (m, se) = mean_and_se(&xs);
        assert!((m - 2.0).abs() < 3.0 * se);
        assert!(xs.iter().any(|&x| x < -2.0));
    }

    #[test]
    fn far_tail_terminates_and_respects_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            assert!(sample_trunc_normal_lower(0.0, 1.0, 8.0, &mut rng) > 8.0);
        }
        // tail mean ≈ a + 1/a for large a
        let xs: Vec<f64> = (0..100_000)
            .map(|_| sample_trunc_normal_lower(0.0, 1.0, 8.0, &mut rng))
            .collect();
        let (m, _) = mean_and_se(&xs);
        let exact = 1.0 / super::super::normal::mills_ratio(8.0);
        assert!((m - exact).abs() < 1e-3, "{m} vs {exact}");
    }

    #[test]
    fn stress_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cases = [
            (0.0, 1.0, 40.0),
            (0.0, 1.0, -40.0),
            (3.0, 0.01, 3.4),
            (-2.0, 9.0, 0.0),
            (1e3, 1.0, 0.0),
            (-1e3, 1.0, 0.0),
            (0.0, 1.0, 5.0),
            (0.0, 1.0, 4.999),
        ];
        for _ in 0..125_000 {
            for &(m, v, lo) in &cases {
                let x = sample_trunc_normal_lower(m, v, lo, &mut rng);
                assert!(x > lo && x.is_finite(), "{x} <= {lo}");
            }
        }
    }
}
