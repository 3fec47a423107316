use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::UtteranceRecord;

/// Text-independent protocol: disjoint sentence sets for training and testing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitProtocol {
    train_sentences: BTreeSet<u32>,
    test_sentences: BTreeSet<u32>,
}

impl SplitProtocol {
    pub fn new(train: impl IntoIterator<Item = u32>, test: impl IntoIterator<Item = u32>) -> Result<Self> {
        let train_sentences: BTreeSet<u32> = train.into_iter().collect();
        let test_sentences: BTreeSet<u32> = test.into_iter().collect();
        if let Some(s) = train_sentences.intersection(&test_sentences).next() {
            return Err(Error::InvalidSpec(format!(
                "sentence {s} is in both the training and test sets"
            )));
        }
        Ok(Self {
            train_sentences,
            test_sentences,
        })
    }

    pub fn train_sentences(&self) -> &BTreeSet<u32> {
        &self.train_sentences
    }

    pub fn test_sentences(&self) -> &BTreeSet<u32> {
        &self.test_sentences
    }
}

impl Default for SplitProtocol {
    /// Sentences 1-4 train, 5-8 test.
    fn default() -> Self {
        Self::new(1..=4, 5..=8).expect("disjoint")
    }
}

/// Partitions records by sentence index. Records whose sentence is in neither set are
/// left out of both sides.
pub fn split(records: &[UtteranceRecord], protocol: &SplitProtocol) -> (Vec<UtteranceRecord>, Vec<UtteranceRecord>) {
    let train = records
        .iter()
        .filter(|r| protocol.train_sentences.contains(&r.sentence))
        .cloned()
        .collect();
    let test = records
        .iter()
        .filter(|r| protocol.test_sentences.contains(&r.sentence))
        .cloned()
        .collect();
    (train, test)
}
