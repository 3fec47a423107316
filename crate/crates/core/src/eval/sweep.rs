use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::argmax;
use crate::recognizer::{speaker_scores, LabelledUtterance, ModelBank};
use crate::sphmm::{score_parts, FusionConfig, ScoreParts};

/// `0.0, 0.1, ..., 1.0`.
pub fn default_alphas() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Two-stage accuracies per weighting value and true emotion, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSweep {
    pub alphas: Vec<f64>,
    /// Bank emotions with at least one test utterance, in bank order.
    pub emotions: Vec<String>,
    pub counts: Vec<usize>,
    /// `speaker_accuracy[a][e]`.
    pub speaker_accuracy: Vec<Vec<f64>>,
    pub emotion_accuracy: Vec<Vec<f64>>,
    pub overall_speaker_accuracy: Vec<f64>,
    pub overall_emotion_accuracy: Vec<f64>,
}

struct Scored {
    emotion: usize,
    speaker: usize,
    parts: Vec<ScoreParts>,
    /// Stage-b winner for every candidate emotion; it does not depend on the weighting.
    stage_b: Vec<usize>,
}

/// Re-runs stage a for every weighting value. Acoustic, prosodic and stage-b scores are
/// computed once per utterance and reused, so only the fusion changes between columns.
pub fn alpha_sweep(
    bank: &ModelBank,
    test: &[LabelledUtterance],
    alphas: &[f64],
    length_normalize: bool,
) -> Result<AlphaSweep> {
    if test.is_empty() {
        return Err(Error::EmptyResults);
    }
    if !bank.has_emotion_models() {
        return Err(Error::EmptyBank("emotion models"));
    }
    let configs: Vec<FusionConfig> = alphas
        .iter()
        .map(|&a| FusionConfig::new(a, length_normalize))
        .collect::<Result<_>>()?;
    let scored: Vec<Scored> = test
        .par_iter()
        .map(|u| {
            let parts = bank
                .emotion_models()
                .iter()
                .map(|m| score_parts(&m.acoustic, &m.supra, u.utterance))
                .collect::<Result<Vec<_>>>()?;
            let stage_b = (0..bank.emotions().len())
                .map(|e| {
                    let scores = speaker_scores(&u.utterance.features, e, bank)?;
                    argmax(&scores).ok_or(Error::EmptyBank("speaker models"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Scored {
                emotion: bank.emotion_index(u.emotion)?,
                speaker: bank.speaker_index(u.speaker)?,
                parts,
                stage_b,
            })
        })
        .collect::<Result<_>>()?;

    let m = bank.emotions().len();
    let mut counts = vec![0usize; m];
    for s in &scored {
        counts[s.emotion] += 1;
    }
    let present: Vec<usize> = (0..m).filter(|&e| counts[e] > 0).collect();
    let pct = |hits: usize, n: usize| 100.0 * hits as f64 / n as f64;

    let mut speaker_accuracy = Vec::new();
    let mut emotion_accuracy = Vec::new();
    let mut overall_speaker_accuracy = Vec::new();
    let mut overall_emotion_accuracy = Vec::new();
    for cfg in &configs {
        let mut spk_hits = vec![0usize; m];
        let mut emo_hits = vec![0usize; m];
        for s in &scored {
            let fused: Vec<f64> = s.parts.iter().map(|p| p.fuse(cfg)).collect();
            let e_star = argmax(&fused).expect("non-empty bank");
            emo_hits[s.emotion] += usize::from(e_star == s.emotion);
            spk_hits[s.emotion] += usize::from(s.stage_b[e_star] == s.speaker);
        }
        speaker_accuracy.push(present.iter().map(|&e| pct(spk_hits[e], counts[e])).collect());
        emotion_accuracy.push(present.iter().map(|&e| pct(emo_hits[e], counts[e])).collect());
        overall_speaker_accuracy.push(pct(spk_hits.iter().sum(), scored.len()));
        overall_emotion_accuracy.push(pct(emo_hits.iter().sum(), scored.len()));
    }
    Ok(AlphaSweep {
        alphas: alphas.to_vec(),
        emotions: present.iter().map(|&e| bank.emotions()[e].clone()).collect(),
        counts: present.iter().map(|&e| counts[e]).collect(),
        speaker_accuracy,
        emotion_accuracy,
        overall_speaker_accuracy,
        overall_emotion_accuracy,
    })
}

impl AlphaSweep {
    /// Long format, one line per (alpha, emotion) plus an `all` line per alpha:
    /// `alpha, emotion, count, speaker_accuracy, emotion_accuracy`.
    pub fn write_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = String::from("alpha\temotion\tcount\tspeaker_accuracy\temotion_accuracy\n");
        let total: usize = self.counts.iter().sum();
        for (a, alpha) in self.alphas.iter().enumerate() {
            for (e, emotion) in self.emotions.iter().enumerate() {
                out.push_str(&format!(
                    "{alpha}\t{emotion}\t{}\t{:.2}\t{:.2}\n",
                    self.counts[e], self.speaker_accuracy[a][e], self.emotion_accuracy[a][e]
                ));
            }
            out.push_str(&format!(
                "{alpha}\tall\t{total}\t{:.2}\t{:.2}\n",
                self.overall_speaker_accuracy[a], self.overall_emotion_accuracy[a]
            ));
        }
        super::write_text(path, &out)
    }
}
