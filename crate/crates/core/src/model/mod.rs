//! The joint projected-normal and skew-normal model.

mod conditional;
mod density;
mod dependence;
mod identify;
mod params;
mod simulate;
mod transform;

pub use conditional::{conditional_circular_params, conditional_linear_params, ssn_moments, SsnParams};
pub use density::jpsn_aug_log_density;
pub use dependence::{
    circ_circ_corr, circ_lin_r2, dependence_matrix, CellKind, DependenceMatrix,
    DEFAULT_DEPENDENCE_MC,
};
pub use identify::{identify, identify_mu_sigma, CMatrix};
pub use params::{JpsnParams, CONSTRAINT_TOL};
pub use simulate::{simulate_jpsn, LatentState};
pub use transform::transform_pn_params;
