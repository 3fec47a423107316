//! Continuous-density left-to-right HMMs.

mod gmm;
mod inference;
mod kmeans;
mod model;
mod train;

pub use gmm::GaussianMixture;
pub use inference::{forward_backward, forward_log_likelihood, viterbi, Lattice};
pub use model::{AcousticModel, LtrHmm};
pub use train::{
    baum_welch, init_model, init_model_from_assignments, total_log_likelihood, TrainingConfig,
    TrainingReport,
};
