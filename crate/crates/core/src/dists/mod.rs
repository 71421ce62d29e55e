//! Probability kernels: normal family samplers, the univariate projected
//! normal, the skew-normal and the Abe-Ley cylindrical density.

pub mod abeley;
pub mod mvn;
pub mod mvn_cdf;
pub mod niw;
pub mod normal;
pub mod pn;
pub mod ssn;
pub mod truncnorm;

pub use abeley::{abeley_circular_log_density, abeley_log_density, AbeLeyParams};
pub use mvn::{mvn_log_density, sample_mvn, MvnParams};
pub use mvn_cdf::{mvn_cdf_mc, DEFAULT_MC_PAIRS};
pub use niw::{sample_inverse_wishart, sample_niw, NiwParams};
pub use normal::{std_normal_cdf, std_normal_inv_cdf};
pub use pn::{pn1_log_density, Pn1};
pub use ssn::{ssn1_log_density, ssn_log_density, SsnLogDensity};
pub use truncnorm::{sample_half_normal, sample_trunc_normal_lower};
