use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{FeatureCache, UtteranceRecord};
use crate::error::{Error, Result};
use crate::features::{FeatureSequence, Utterance};
use crate::hmm::{baum_welch, init_model, AcousticModel, TrainingConfig};
use crate::sphmm::{train_suprasegmental, SupraConfig, SupraMapping};

use super::{EmotionModel, ModelBank};

/// An utterance together with its speaker and emotion labels.
#[derive(Debug, Clone, Copy)]
pub struct LabelledUtterance<'a> {
    pub speaker: &'a str,
    pub emotion: &'a str,
    pub utterance: &'a Utterance,
}

/// Pairs each record with its cached features.
pub fn labelled<'a>(records: &'a [UtteranceRecord], cache: &'a FeatureCache) -> Result<Vec<LabelledUtterance<'a>>> {
    records
        .iter()
        .map(|r| {
            Ok(LabelledUtterance {
                speaker: &r.speaker,
                emotion: &r.emotion,
                utterance: cache.get(&r.id)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankConfig {
    pub num_states: usize,
    pub num_mixtures: usize,
    pub supra_mixtures: usize,
    pub mapping: SupraMapping,
    pub training: TrainingConfig,
    pub seed: u64,
}

impl Default for BankConfig {
    fn default() -> Self {
        Self {
            num_states: 9,
            num_mixtures: 10,
            supra_mixtures: 3,
            mapping: SupraMapping::default(),
            training: TrainingConfig::default(),
            seed: 0,
        }
    }
}

const ROLE_EMOTION: u64 = 1;
const ROLE_SUPRA: u64 = 2;
const ROLE_SPEAKER: u64 = 3;
const ROLE_ONE_STAGE: u64 = 4;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent seed per model, so results do not depend on training order.
fn model_seed(seed: u64, role: u64, a: usize, b: usize) -> u64 {
    splitmix(splitmix(splitmix(seed ^ role.rotate_left(48)) ^ a as u64) ^ (b as u64).rotate_left(24))
}

fn train_acoustic(sequences: &[&FeatureSequence], cfg: &BankConfig, seed: u64) -> Result<AcousticModel> {
    let init = init_model(sequences, cfg.num_states, cfg.num_mixtures, cfg.training.variance_floor, seed)?;
    Ok(baum_welch(&init, sequences, &cfg.training)?.0)
}

fn select<'a>(
    data: &[LabelledUtterance<'a>],
    keep: impl Fn(&LabelledUtterance<'a>) -> bool,
    what: impl FnOnce() -> String,
) -> Result<Vec<&'a Utterance>> {
    let picked: Vec<&Utterance> = data.iter().filter(|u| keep(u)).map(|u| u.utterance).collect();
    if picked.is_empty() {
        return Err(Error::InvalidSpec(format!("no training utterances for {}", what())));
    }
    Ok(picked)
}

/// One acoustic and one prosodic model per emotion, each trained on every training
/// utterance of that emotion.
pub fn train_emotion_models(emotions: &[String], data: &[LabelledUtterance], cfg: &BankConfig) -> Result<Vec<EmotionModel>> {
    if cfg.mapping.num_states() != cfg.num_states {
        return Err(Error::InvalidSpec(format!(
            "supra mapping covers {} states, acoustic models have {}",
            cfg.mapping.num_states(),
            cfg.num_states
        )));
    }
    emotions
        .par_iter()
        .enumerate()
        .map(|(e, emotion)| {
            let utts = select(data, |u| u.emotion == emotion, || format!("emotion {emotion}"))?;
            let seqs: Vec<&FeatureSequence> = utts.iter().map(|u| &u.features).collect();
            let acoustic = train_acoustic(&seqs, cfg, model_seed(cfg.seed, ROLE_EMOTION, e, 0))?;
            let supra_cfg = SupraConfig {
                num_mixtures: cfg.supra_mixtures,
                training: cfg.training.clone(),
                seed: model_seed(cfg.seed, ROLE_SUPRA, e, 0),
            };
            let (supra, _) = train_suprasegmental(&acoustic, &utts, &cfg.mapping, &supra_cfg)?;
            Ok(EmotionModel { acoustic, supra })
        })
        .collect()
}

/// `models[e][s]`: one acoustic model per (speaker, emotion) pair.
pub fn train_speaker_models(
    emotions: &[String],
    speakers: &[String],
    data: &[LabelledUtterance],
    cfg: &BankConfig,
) -> Result<Vec<Vec<AcousticModel>>> {
    let pairs: Vec<(usize, usize)> = (0..emotions.len())
        .flat_map(|e| (0..speakers.len()).map(move |s| (e, s)))
        .collect();
    let flat: Vec<AcousticModel> = pairs
        .par_iter()
        .map(|&(e, s)| {
            let (emotion, speaker) = (&emotions[e], &speakers[s]);
            let utts = select(
                data,
                |u| u.emotion == emotion && u.speaker == speaker,
                || format!("speaker {speaker} in emotion {emotion}"),
            )?;
            let seqs: Vec<&FeatureSequence> = utts.iter().map(|u| &u.features).collect();
            train_acoustic(&seqs, cfg, model_seed(cfg.seed, ROLE_SPEAKER, s, e))
        })
        .collect::<Result<_>>()?;
    let mut it = flat.into_iter();
    Ok((0..emotions.len())
        .map(|_| it.by_ref().take(speakers.len()).collect())
        .collect())
}

/// One acoustic model per speaker, pooled over every emotion's training utterances.
pub fn train_one_stage_models(speakers: &[String], data: &[LabelledUtterance], cfg: &BankConfig) -> Result<Vec<AcousticModel>> {
    speakers
        .par_iter()
        .enumerate()
        .map(|(s, speaker)| {
            let utts = select(data, |u| u.speaker == speaker, || format!("speaker {speaker}"))?;
            let seqs: Vec<&FeatureSequence> = utts.iter().map(|u| &u.features).collect();
            train_acoustic(&seqs, cfg, model_seed(cfg.seed, ROLE_ONE_STAGE, s, 0))
        })
        .collect()
}

/// Trains all three model groups.
pub fn train_bank(emotions: &[String], speakers: &[String], data: &[LabelledUtterance], cfg: &BankConfig) -> Result<ModelBank> {
    let emotion_models = train_emotion_models(emotions, data, cfg)?;
    let speaker_models = train_speaker_models(emotions, speakers, data, cfg)?;
    let one_stage = train_one_stage_models(speakers, data, cfg)?;
    ModelBank::new(emotions.to_vec(), speakers.to_vec(), emotion_models, speaker_models, one_stage)
}
