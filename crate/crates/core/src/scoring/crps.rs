use crate::error::{Error, Result};
use crate::geometry::{angular_distance, Angle};

fn check_nonempty(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("CRPS needs at least one predictive draw"));
    }
    Ok(())
}

/// Sample CRPS of a circular outcome with the shortest-arc distance:
/// `(1/B) Σ d(θ, θ_b) − (1/2B²) Σ_b Σ_b' d(θ_b, θ_b')`.
pub fn crps_circular(truth: Angle, draws: &[Angle]) -> Result<f64> {
    check_nonempty(draws.len())?;
    let b = draws.len() as f64;
    let first: f64 = draws.iter().map(|&d| angular_distance(truth, d)).sum::<f64>() / b;
    let mut pair = 0.0;
    for (i, &x) in draws.iter().enumerate() {
        for &y in &draws[i + 1..] {
            pair += angular_distance(x, y);
        }
    }
    // each unordered pair appears twice in the double sum
    Ok((first - pair / (b * b)).max(0.0))
}

/// Sample CRPS of a linear outcome,
/// `(1/B) Σ |y − y_b| − (1/2B²) Σ_b Σ_b' |y_b − y_b'|`, evaluated in
/// `O(B log B)` through the sorted draws.
pub fn crps_linear(truth: f64, draws: &[f64]) -> Result<f64> {
    check_nonempty(draws.len())?;
    let b = draws.len();
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let first: f64 = sorted.iter().map(|x| (truth - x).abs()).sum::<f64>() / b as f64;
    // Σ_{i<j} (x_(j) − x_(i)) = Σ_i (2i − B + 1) x_(i); centering on the
    // minimum keeps constant draws exactly at zero
    let lo = sorted[0];
    let pair: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| (2.0 * i as f64 - b as f64 + 1.0) * (x - lo))
        .sum();
    Ok((first - pair / (b * b) as f64).max(0.0))
}

/// [`crps_linear`] by the plain double sum.
pub fn crps_linear_double_sum(truth: f64, draws: &[f64]) -> Result<f64> {
    check_nonempty(draws.len())?;
    let b = draws.len() as f64;
    let first: f64 = draws.iter().map(|x| (truth - x).abs()).sum::<f64>() / b;
    let mut pair = 0.0;
    for x in draws {
        for y in draws {
            pair += (x - y).abs();
        }
    }
    Ok((first - pair / (2.0 * b * b)).max(0.0))
}
