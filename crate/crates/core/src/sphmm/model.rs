use std::borrow::Borrow;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureSequence, Utterance};
use crate::hmm::{baum_welch, init_model_from_assignments, viterbi, AcousticModel, LtrHmm, TrainingConfig, TrainingReport};

use super::summaries::summarize;
use super::{SupraMapping, SUPRA_DIM};

/// Prosodic model over segment summaries, tied to the acoustic model whose alignments
/// produce those summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuprasegmentalModel {
    pub hmm: LtrHmm,
    pub mapping: SupraMapping,
}

pub const SUPRA_KIND: &str = "suprasegmental-hmm";

impl SuprasegmentalModel {
    pub fn new(hmm: LtrHmm, mapping: SupraMapping) -> Result<Self> {
        if hmm.num_states() != mapping.num_groups() {
            return Err(Error::InvalidModel(format!(
                "{} suprasegmental states but the mapping has {} groups",
                hmm.num_states(),
                mapping.num_groups()
            )));
        }
        if hmm.dim() != SUPRA_DIM {
            return Err(Error::DimensionMismatch {
                expected: SUPRA_DIM,
                actual: hmm.dim(),
            });
        }
        Ok(Self { hmm, mapping })
    }

    /// Aligns the utterance with `acoustic` and returns its summary sequence.
    pub fn observations(&self, acoustic: &AcousticModel, utterance: &Utterance) -> Result<FeatureSequence> {
        observations(acoustic, utterance, &self.mapping).map(|(_, seq)| seq)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::persist::save(path, SUPRA_KIND, self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let model: Self = crate::persist::load(path, SUPRA_KIND)?;
        model.hmm.validate()?;
        Self::new(model.hmm, model.mapping)
    }
}

fn observations(
    acoustic: &AcousticModel,
    utterance: &Utterance,
    mapping: &SupraMapping,
) -> Result<(Vec<usize>, FeatureSequence)> {
    if acoustic.num_states() != mapping.num_states() {
        return Err(Error::InvalidModel(format!(
            "mapping covers {} states, acoustic model has {}",
            mapping.num_states(),
            acoustic.num_states()
        )));
    }
    let (path, _) = viterbi(acoustic, &utterance.features)?;
    summarize(&path, &utterance.prosody, mapping)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupraConfig {
    pub num_mixtures: usize,
    pub training: TrainingConfig,
    pub seed: u64,
}

impl Default for SupraConfig {
    fn default() -> Self {
        Self {
            num_mixtures: 3,
            training: TrainingConfig::default(),
            seed: 0,
        }
    }
}

/// Trains the prosodic model on top of a trained acoustic model: each utterance is
/// Viterbi-aligned, summarised per acoustic-state segment, and the summaries train a
/// left-to-right model with one state per mapping group. Initial state assignment
/// follows the mapping.
pub fn train_suprasegmental<U: Borrow<Utterance> + Sync>(
    acoustic: &AcousticModel,
    utterances: &[U],
    mapping: &SupraMapping,
    config: &SupraConfig,
) -> Result<(SuprasegmentalModel, TrainingReport)> {
    if utterances.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    use rayon::prelude::*;
    let aligned: Vec<(Vec<usize>, FeatureSequence)> = utterances
        .par_iter()
        .map(|u| observations(acoustic, u.borrow(), mapping))
        .collect::<Result<_>>()?;
    let assignments: Vec<Vec<usize>> = aligned
        .iter()
        .map(|(states, _)| states.iter().map(|&s| mapping.group_of(s).expect("checked path")).collect())
        .collect();
    let sequences: Vec<FeatureSequence> = aligned.into_iter().map(|(_, seq)| seq).collect();
    let init = init_model_from_assignments(
        &sequences,
        &assignments,
        mapping.num_groups(),
        config.num_mixtures,
        config.training.variance_floor,
        config.seed,
    )?;
    let (hmm, report) = baum_welch(&init, &sequences, &config.training)?;
    Ok((SuprasegmentalModel::new(hmm, mapping.clone())?, report))
}
