//! Suprasegmental layer: prosodic models trained on top of acoustic alignments, and
//! fusion of acoustic and prosodic scores.

mod fusion;
mod mapping;
mod model;
mod summaries;

pub use fusion::{fused_score, score_parts, FusionConfig, ScoreParts};
pub use mapping::SupraMapping;
pub use model::{train_suprasegmental, SupraConfig, SuprasegmentalModel};
pub use summaries::{segment_summaries, SUPRA_DIM};
