use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureSequence, Utterance};

/// Per-dimension z-normalization fitted on training features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

pub const NORMALIZER_KIND: &str = "normalizer";

impl Normalizer {
    pub fn fit<'a>(sequences: impl IntoIterator<Item = &'a FeatureSequence>) -> Result<Self> {
        let sequences: Vec<&FeatureSequence> = sequences.into_iter().collect();
        let dim = sequences.first().ok_or(Error::EmptyTrainingSet)?.dim();
        let mut count = 0usize;
        let mut mean = vec![0.0; dim];
        for s in &sequences {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: s.dim(),
                });
            }
            for x in s.frames() {
                count += 1;
                for (m, v) in mean.iter_mut().zip(x) {
                    *m += v;
                }
            }
        }
        if count == 0 {
            return Err(Error::EmptyTrainingSet);
        }
        mean.iter_mut().for_each(|m| *m /= count as f64);
        let mut var = vec![0.0; dim];
        for s in &sequences {
            for x in s.frames() {
                for ((acc, v), m) in var.iter_mut().zip(x).zip(&mean) {
                    *acc += (v - m) * (v - m);
                }
            }
        }
        let std = var
            .iter()
            .zip(&mean)
            .enumerate()
            .map(|(d, (v, m))| {
                let v = v / count as f64;
                if v <= f64::EPSILON * m * m || v == 0.0 {
                    Err(Error::DegenerateDimension(d))
                } else {
                    Ok(v.sqrt())
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { mean, std })
    }

    pub fn apply(&self, seq: &FeatureSequence) -> Result<FeatureSequence> {
        if seq.dim() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                actual: seq.dim(),
            });
        }
        let mut out = seq.clone();
        for x in out.frames_mut() {
            for ((v, m), s) in x.iter_mut().zip(&self.mean).zip(&self.std) {
                *v = (*v - m) / s;
            }
        }
        Ok(out)
    }

    pub fn apply_utterance(&self, u: &Utterance) -> Result<Utterance> {
        Ok(Utterance {
            features: self.apply(&u.features)?,
            prosody: u.prosody.clone(),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::persist::save(path, NORMALIZER_KIND, self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        crate::persist::load(path, NORMALIZER_KIND)
    }
}

/// Fits normalization statistics on `train` only and applies them to both sets.
/// Prosodic tracks pass through unchanged.
pub fn normalize_features(
    train: &[Utterance],
    test: &[Utterance],
) -> Result<(Vec<Utterance>, Vec<Utterance>, Normalizer)> {
    let norm = Normalizer::fit(train.iter().map(|u| &u.features))?;
    let train = train.iter().map(|u| norm.apply_utterance(u)).collect::<Result<_>>()?;
    let test = test.iter().map(|u| norm.apply_utterance(u)).collect::<Result<_>>()?;
    Ok((train, test, norm))
}
