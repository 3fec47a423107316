use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recognizer::ResultsTable;

use super::{average_diagonal, performance_table, ConfusionMatrix, PerformanceTable, SpeakerOutcome};

/// Everything derived from a results file with known truth labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub confusion: ConfusionMatrix,
    /// Fraction of utterances whose emotion was identified correctly, in percent.
    pub emotion_accuracy: f64,
    /// Mean of the confusion diagonal.
    pub average_diagonal: f64,
    pub two_stage: PerformanceTable,
    pub one_stage: Option<PerformanceTable>,
}

impl Evaluation {
    /// Writes `confusion.tsv`, `two_stage.tsv`, `one_stage.tsv` (when present) and
    /// `summary.tsv` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.confusion.write_tsv(dir.join("confusion.tsv"))?;
        self.two_stage.write_tsv(dir.join("two_stage.tsv"))?;
        let mut summary = String::from("statistic\tvalue\n");
        summary.push_str(&format!("emotion_accuracy\t{:.2}\n", self.emotion_accuracy));
        summary.push_str(&format!("average_diagonal\t{:.2}\n", self.average_diagonal));
        summary.push_str(&format!("two_stage_mean\t{:.2}\n", self.two_stage.mean));
        summary.push_str(&format!("two_stage_sd\t{:.2}\n", self.two_stage.sd));
        if let Some(one) = &self.one_stage {
            one.write_tsv(dir.join("one_stage.tsv"))?;
            summary.push_str(&format!("one_stage_mean\t{:.2}\n", one.mean));
            summary.push_str(&format!("one_stage_sd\t{:.2}\n", one.sd));
        }
        super::write_text(dir.join("summary.tsv"), &summary)
    }
}

/// Confusion matrix over the results' emotion labels and per-gender speaker tables for
/// both recognizers. Rows without truth labels are ignored.
pub fn evaluate_results(table: &ResultsTable) -> Result<Evaluation> {
    let labelled: Vec<_> = table
        .rows
        .iter()
        .filter_map(|r| match (&r.true_speaker, &r.true_emotion, r.gender) {
            (Some(s), Some(e), Some(g)) => Some((r, s.as_str(), e.as_str(), g)),
            _ => None,
        })
        .collect();
    if labelled.is_empty() {
        return Err(Error::EmptyResults);
    }
    let pairs: Vec<(&str, &str)> = labelled.iter().map(|(r, _, e, _)| (*e, r.identified_emotion.as_str())).collect();
    let confusion = ConfusionMatrix::from_pairs(&table.emotions, &pairs)?;
    let emotion_accuracy =
        100.0 * pairs.iter().filter(|(t, i)| t == i).count() as f64 / pairs.len() as f64;
    let outcomes = |pick: &dyn Fn(&crate::recognizer::UtteranceResult) -> Option<&str>| -> Vec<SpeakerOutcome> {
        labelled
            .iter()
            .filter_map(|(r, s, e, g)| {
                pick(r).map(|identified| SpeakerOutcome {
                    true_speaker: s,
                    identified_speaker: identified,
                    emotion: e,
                    gender: *g,
                })
            })
            .collect()
    };
    let two_stage = performance_table(&table.emotions, &outcomes(&|r| Some(r.identified_speaker.as_str())))?;
    let one = outcomes(&|r| r.one_stage_speaker.as_deref());
    let one_stage = if one.is_empty() {
        None
    } else {
        Some(performance_table(&table.emotions, &one)?)
    };
    Ok(Evaluation {
        average_diagonal: average_diagonal(&confusion),
        confusion,
        emotion_accuracy,
        two_stage,
        one_stage,
    })
}
