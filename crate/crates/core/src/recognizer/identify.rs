use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureSequence, Utterance};
use crate::hmm::{forward_log_likelihood, AcousticModel};
use crate::math::argmax;
use crate::sphmm::{fused_score, FusionConfig};

use super::ModelBank;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentificationResult {
    pub emotion_index: usize,
    pub identified_emotion: String,
    pub speaker_index: usize,
    pub identified_speaker: String,
    /// Fused score per bank emotion.
    pub emotion_scores: Vec<f64>,
    /// Log-likelihood per bank speaker under the identified emotion's speaker models.
    pub speaker_scores: Vec<f64>,
}

fn pick(scores: &[f64]) -> Result<usize> {
    argmax(scores).ok_or(Error::EmptyBank("no candidates"))
}

fn log_likelihoods(models: &[AcousticModel], features: &FeatureSequence) -> Result<Vec<f64>> {
    models.par_iter().map(|m| forward_log_likelihood(m, features)).collect()
}

/// Stage a: the emotion whose fused score is highest (lowest index on ties).
pub fn identify_emotion(utterance: &Utterance, bank: &ModelBank, cfg: &FusionConfig) -> Result<(usize, Vec<f64>)> {
    if !bank.has_emotion_models() {
        return Err(Error::EmptyBank("emotion models"));
    }
    let scores: Vec<f64> = bank
        .emotion_models()
        .par_iter()
        .map(|m| fused_score(&m.acoustic, &m.supra, utterance, cfg))
        .collect::<Result<_>>()?;
    Ok((pick(&scores)?, scores))
}

/// Per-speaker log-likelihoods under the speaker models of one emotion, by index.
pub fn speaker_scores(features: &FeatureSequence, emotion: usize, bank: &ModelBank) -> Result<Vec<f64>> {
    if emotion >= bank.emotions().len() {
        return Err(Error::UnknownEmotion(format!("#{emotion}")));
    }
    if !bank.has_speaker_models() {
        return Err(Error::EmptyBank("speaker models"));
    }
    log_likelihoods(bank.speaker_models_for(emotion), features)
}

/// Stage b: the speaker whose model for `emotion` gives the highest likelihood.
pub fn identify_speaker_given_emotion(features: &FeatureSequence, emotion: &str, bank: &ModelBank) -> Result<(usize, Vec<f64>)> {
    let scores = speaker_scores(features, bank.emotion_index(emotion)?, bank)?;
    Ok((pick(&scores)?, scores))
}

/// Stage a followed by stage b on the emotion stage a picked.
pub fn two_stage_identify(utterance: &Utterance, bank: &ModelBank, cfg: &FusionConfig) -> Result<IdentificationResult> {
    let (e, emotion_scores) = identify_emotion(utterance, bank, cfg)?;
    let speaker_scores = speaker_scores(&utterance.features, e, bank)?;
    let s = pick(&speaker_scores)?;
    Ok(IdentificationResult {
        emotion_index: e,
        identified_emotion: bank.emotions()[e].clone(),
        speaker_index: s,
        identified_speaker: bank.speakers()[s].clone(),
        emotion_scores,
        speaker_scores,
    })
}

/// Emotion-independent baseline: the pooled speaker model with the highest likelihood.
pub fn one_stage_identify(features: &FeatureSequence, bank: &ModelBank) -> Result<(usize, Vec<f64>)> {
    if !bank.has_one_stage_models() {
        return Err(Error::EmptyBank("one-stage models"));
    }
    let scores = log_likelihoods(bank.one_stage_models(), features)?;
    Ok((pick(&scores)?, scores))
}
