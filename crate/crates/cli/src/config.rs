//! Run configuration: defaults, a TOML file (or a previous manifest), then
//! command-line flags, in increasing precedence.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum ModelKind {
    #[serde(rename = "jpsn")]
    #[value(name = "jpsn")]
    Jpsn,
    #[serde(rename = "cyl-jpsn")]
    #[value(name = "cyl-jpsn")]
    CylJpsn,
    #[serde(rename = "abeley")]
    #[value(name = "abeley")]
    AbeLey,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Jpsn => "jpsn",
            ModelKind::CylJpsn => "cyl-jpsn",
            ModelKind::AbeLey => "abeley",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    /// Cylindrical units as 1-based `[angle, linear]` pairs. Defaults to
    /// pairing angle `i` with linear `i`.
    pub partition: Option<Vec<[usize; 2]>>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            kind: ModelKind::Jpsn,
            partition: None,
        }
    }
}

/// `(μ, Σ) ~ NIW(0, kappa0, nu0, psi_scale I)`, `λ ~ N(0, lambda_var I)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorConfig {
    pub kappa0: f64,
    /// Defaults to `2p + q + 10`.
    pub nu0: Option<f64>,
    pub psi_scale: f64,
    pub lambda_var: f64,
}

impl Default for PriorConfig {
    fn default() -> Self {
        PriorConfig {
            kappa0: 0.001,
            nu0: None,
            psi_scale: 1.0,
            lambda_var: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainSettings {
    pub iterations: usize,
    pub burnin: usize,
    pub thin: usize,
    pub seed: u64,
    pub chains: usize,
}

impl Default for ChainSettings {
    fn default() -> Self {
        ChainSettings {
            iterations: 12000,
            burnin: 8000,
            thin: 2,
            seed: 1,
            chains: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringConfig {
    pub holdout_fraction: f64,
    pub models: Vec<ModelKind>,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            holdout_fraction: 0.1,
            models: vec![ModelKind::Jpsn, ModelKind::CylJpsn, ModelKind::AbeLey],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub preset: String,
    pub n: usize,
    pub latents: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            preset: "example1".into(),
            n: 1000,
            latents: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AbeLeyConfig {
    pub step: f64,
    pub target_acceptance: f64,
    /// Defaults to the burn-in length.
    pub adapt_window: Option<usize>,
}

impl Default for AbeLeyConfig {
    fn default() -> Self {
        AbeLeyConfig {
            step: 0.1,
            target_acceptance: 0.3,
            adapt_window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PredictConfig {
    /// Latent sweeps per parameter draw.
    pub sweeps: usize,
}

impl Default for PredictConfig {
    fn default() -> Self {
        PredictConfig {
            sweeps: jpsn::mcmc::DEFAULT_PREDICT_SWEEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SummarizeConfig {
    /// Draws used for the dependence matrix, evenly spaced.
    pub dependence_draws: usize,
    /// Simulated records per draw for the dependence matrix.
    pub mc_n: usize,
}

impl Default for SummarizeConfig {
    fn default() -> Self {
        SummarizeConfig {
            dependence_draws: 200,
            mc_n: 500,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoConfig {
    pub data: Option<String>,
    pub draws: Option<String>,
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub prior: PriorConfig,
    pub chain: ChainSettings,
    pub scoring: ScoringConfig,
    pub simulate: SimulateConfig,
    pub abeley: AbeLeyConfig,
    pub predict: PredictConfig,
    pub summarize: SummarizeConfig,
    pub io: IoConfig,
}

/// Flag values that override the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub iterations: Option<usize>,
    pub burnin: Option<usize>,
    pub thin: Option<usize>,
    pub chains: Option<usize>,
    pub holdout_fraction: Option<f64>,
    pub model: Option<ModelKind>,
    pub models: Option<Vec<ModelKind>>,
    pub preset: Option<String>,
    pub n: Option<usize>,
    pub latents: bool,
    pub data: Option<String>,
    pub draws: Option<String>,
    pub out: Option<String>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads a TOML file, or a JSON manifest whose `config` field holds a
    /// resolved configuration.
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            let mut value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
            let config = match value.get_mut("config") {
                Some(c) => c.take(),
                None => value,
            };
            serde_json::from_value(config).map_err(|e| CliError::Config(e.to_string()))
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        let c = &mut self.chain;
        c.seed = o.seed.unwrap_or(c.seed);
        c.iterations = o.iterations.unwrap_or(c.iterations);
        c.burnin = o.burnin.unwrap_or(c.burnin);
        c.thin = o.thin.unwrap_or(c.thin);
        c.chains = o.chains.unwrap_or(c.chains);
        if let Some(f) = o.holdout_fraction {
            self.scoring.holdout_fraction = f;
        }
        if let Some(m) = o.model {
            self.model.kind = m;
        }
        if let Some(ms) = &o.models {
            self.scoring.models = ms.clone();
        }
        if let Some(p) = &o.preset {
            self.simulate.preset = p.clone();
        }
        self.simulate.n = o.n.unwrap_or(self.simulate.n);
        self.simulate.latents |= o.latents;
        for (dst, src) in [
            (&mut self.io.data, &o.data),
            (&mut self.io.draws, &o.draws),
            (&mut self.io.out, &o.out),
        ] {
            if src.is_some() {
                *dst = src.clone();
            }
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let c = &self.chain;
        if c.chains == 0 {
            return Err(CliError::Config("chains must be at least 1".into()));
        }
        jpsn::mcmc::ChainConfig::new(c.iterations, c.burnin, c.thin, c.seed)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let f = self.scoring.holdout_fraction;
        if !(f > 0.0 && f < 1.0) {
            return Err(CliError::Config(format!("holdout_fraction must lie in (0, 1), got {f}")));
        }
        if self.scoring.models.is_empty() {
            return Err(CliError::Config("scoring.models is empty".into()));
        }
        let p = &self.prior;
        if !(p.kappa0 > 0.0 && p.psi_scale > 0.0 && p.lambda_var >= 0.0) {
            return Err(CliError::Config(
                "prior needs kappa0 > 0, psi_scale > 0 and lambda_var >= 0".into(),
            ));
        }
        if self.predict.sweeps == 0 {
            return Err(CliError::Config("predict.sweeps must be at least 1".into()));
        }
        if self.summarize.dependence_draws == 0 || self.summarize.mc_n < 3 {
            return Err(CliError::Config(
                "summarize needs dependence_draws >= 1 and mc_n >= 3".into(),
            ));
        }
        Ok(())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}
