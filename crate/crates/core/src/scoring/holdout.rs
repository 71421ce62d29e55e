use rand::Rng;

use crate::data::{Coord, PolyCylDataset};
use crate::error::{Error, Result};
use crate::mcmc::chain_rng;

/// A held-out entry and its true value (radians for angles).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeldOut {
    pub row: usize,
    pub coord: Coord,
    pub truth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Holdout {
    pub masked: PolyCylDataset,
    pub key: Vec<HeldOut>,
    pub fraction: f64,
    pub warnings: Vec<String>,
}

impl Holdout {
    /// Fraction of the originally observed entries that were masked.
    pub fn realized_fraction(&self, observed: usize) -> f64 {
        self.key.len() as f64 / observed.max(1) as f64
    }
}

/// Masking rate plus the seed that realizes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoldoutPlan {
    pub fraction: f64,
    pub seed: u64,
}

impl HoldoutPlan {
    pub fn split(&self, data: &PolyCylDataset) -> Result<Holdout> {
        holdout_split(data, self.fraction, &mut chain_rng(self.seed, u64::MAX))
    }
}

/// Masks every observed scalar entry independently with probability
/// `fraction`. Entries already missing stay missing and are not scored.
pub fn holdout_split<R: Rng + ?Sized>(
    data: &PolyCylDataset,
    fraction: f64,
    rng: &mut R,
) -> Result<Holdout> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::domain(format!("holdout fraction must lie in (0, 1), got {fraction}")));
    }
    let mut masked = data.clone();
    let mut key = Vec::new();
    for (row, obs) in masked.observations_mut().iter_mut().enumerate() {
        for i in 0..obs.p() {
            if !obs.angle_missing[i] && rng.random::<f64>() < fraction {
                obs.angle_missing[i] = true;
                key.push(HeldOut {
                    row,
                    coord: Coord::Angle(i),
                    truth: obs.angles[i].value(),
                });
            }
        }
        for j in 0..obs.q() {
            if !obs.linear_missing[j] && rng.random::<f64>() < fraction {
                obs.linear_missing[j] = true;
                key.push(HeldOut {
                    row,
                    coord: Coord::Linear(j),
                    truth: obs.linears[j],
                });
            }
        }
    }
    let mut warnings = Vec::new();
    if key.is_empty() {
        warnings.push(format!("holdout fraction {fraction} masked no entries"));
    }
    Ok(Holdout {
        masked,
        key,
        fraction,
        warnings,
    })
}
