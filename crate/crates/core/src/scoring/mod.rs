//! Holdout construction, CRPS for circular and linear predictions, and the
//! model-comparison harness.

mod compare;
mod crps;
mod holdout;

pub use compare::{
    compare_models, score_predictions, AbeLeyFitter, CylindricalJpsnFitter, EntryScore, Fitter,
    JointJpsnFitter, Predictions, ScoreRow, ScoreTable,
};
pub use crps::{crps_circular, crps_linear, crps_linear_double_sum};
pub use holdout::{holdout_split, HeldOut, Holdout, HoldoutPlan};
