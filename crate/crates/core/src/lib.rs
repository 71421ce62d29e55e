//! Joint projected-normal and skew-normal (JPSN) distribution for mixed
//! circular-linear data.
//!
//! The crate covers exact simulation, the augmented density, a Gibbs sampler
//! that works on the unidentified parameterization and identifies draws
//! afterwards, dependence summaries, cylindrical baselines and CRPS scoring.

pub mod baselines;
pub mod data;
pub mod diagnostics;
pub mod dists;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod mcmc;
pub mod model;
pub mod presets;
pub mod scoring;

pub use data::{Coord, PolyCylDataset, PolyCylObservation};
pub use error::{Error, Result};
pub use geometry::{angular_distance, atan_star, polar_embed, Angle};
