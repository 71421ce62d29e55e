use crate::error::{Error, Result};

/// Effective sample size from Geyer's initial monotone positive sequence of
/// paired autocovariances.
pub fn ess(chain: &[f64]) -> Result<f64> {
    let n = chain.len();
    if n < 10 {
        return Err(Error::domain(format!("ESS needs at least 10 values, got {n}")));
    }
    let mean = chain.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = chain.iter().map(|x| x - mean).collect();
    let autocov = |lag: usize| -> f64 {
        centered[..n - lag]
            .iter()
            .zip(&centered[lag..])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64
    };
    let gamma0 = autocov(0);
    if !(gamma0 > 0.0) {
        return Err(Error::domain("ESS of a constant chain is undefined"));
    }
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut m = 0;
    while 2 * m + 1 < n {
        let pair = autocov(2 * m) + autocov(2 * m + 1);
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev);
        sum += pair;
        prev = pair;
        m += 1;
    }
    let tau = (2.0 * sum - gamma0) / gamma0;
    Ok(n as f64 / tau.max(1.0 / n as f64))
}
