use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{JpsnParams, LatentState};

/// Starting state of a chain.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Init {
    /// `r = 1`, `d = √(2/π)`, `λ = 0`, `μ = 0`, `Σ = I`.
    #[default]
    Default,
    Supplied {
        params: JpsnParams,
        latents: LatentState,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burnin: usize,
    pub thin: usize,
    pub seed: u64,
    pub init: Init,
}

impl ChainConfig {
    pub fn new(iterations: usize, burnin: usize, thin: usize, seed: u64) -> Result<Self> {
        let config = ChainConfig {
            iterations,
            burnin,
            thin,
            seed,
            init: Init::Default,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.burnin >= self.iterations {
            return Err(Error::domain(format!(
                "burnin ({}) must be smaller than iterations ({})",
                self.burnin, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::domain("thin must be at least 1"));
        }
        Ok(())
    }

    /// Number of stored draws.
    pub fn n_stored(&self) -> usize {
        (self.iterations - self.burnin).div_ceil(self.thin)
    }

    pub fn is_stored(&self, iteration: usize) -> bool {
        iteration >= self.burnin && (iteration - self.burnin) % self.thin == 0
    }
}

/// The generator for chain `chain` under `seed`: ChaCha8 keyed by the seed,
/// with the chain index as its stream.
pub fn chain_rng(seed: u64, chain: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain);
    rng
}
