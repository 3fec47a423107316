use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Utterance;

use super::UtteranceRecord;

pub const CACHE_KIND: &str = "feature-cache";

/// Extracted (or synthesized) features keyed by utterance id, in id order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureCache {
    pub utterances: BTreeMap<String, Utterance>,
}

impl FeatureCache {
    pub fn insert(&mut self, id: impl Into<String>, utterance: Utterance) {
        self.utterances.insert(id.into(), utterance);
    }

    pub fn get(&self, id: &str) -> Result<&Utterance> {
        self.utterances
            .get(id)
            .ok_or_else(|| Error::MissingFeatures(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }

    /// Runs the audio front end on every record. Records without audio are an error.
    pub fn extract(records: &[UtteranceRecord]) -> Result<Self> {
        use rayon::prelude::*;
        let utterances = records
            .par_iter()
            .map(|r| {
                let path = r.audio.as_ref().ok_or_else(|| Error::MissingFeatures(r.id.clone()))?;
                let clip = crate::dsp::load_audio(path)?;
                Ok((r.id.clone(), crate::dsp::extract(&clip)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self { utterances })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::persist::save(path, CACHE_KIND, self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let cache: Self = crate::persist::load(path, CACHE_KIND)?;
        for u in cache.utterances.values() {
            u.prosody.validate()?;
            if u.features.len() != u.prosody.len() {
                return Err(Error::LengthMismatch {
                    path: u.features.len(),
                    track: u.prosody.len(),
                });
            }
        }
        Ok(cache)
    }
}
