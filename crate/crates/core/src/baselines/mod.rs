//! Comparison models: the Abe-Ley cylindrical density and the JPSN fitted
//! independently per cylindrical unit.

mod abeley;
mod cylindrical;

pub use abeley::{fit_abeley_mh, simulate_abeley, AbeLeyDraws, AbeLeyPrior, MhConfig, CIRCLE_GRID};
pub use cylindrical::{
    cylindrical_prior, fit_cylindrical_jpsn, paired_blocks, validate_partition, CylBlock,
    CylindricalDraws,
};
