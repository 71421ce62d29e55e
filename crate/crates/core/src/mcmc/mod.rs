//! Gibbs sampling for the JPSN model on the unconstrained parameters, with
//! imputation of masked entries and identification of the stored draws.

mod config;
mod ess;
mod gibbs;
mod kernels;
mod predict;
mod prior;

pub use config::{chain_rng, ChainConfig, Init};
pub use ess::ess;
pub use gibbs::{
    free_parameter_names, free_parameter_values, run_gibbs, ChainMeta, IdentifiedDraw,
    PosteriorDraws, RawDraw,
};
pub use kernels::{
    compute_r_coefficients, impute_missing, lambda_full_conditional, niw_full_conditional,
    record_vector, sample_d, slice_update_r, DStep, Imputer, RStep,
};
pub use predict::{predict_missing, DEFAULT_PREDICT_SWEEPS};
pub use prior::PriorSpec;

#[cfg(test)]
mod tests;
