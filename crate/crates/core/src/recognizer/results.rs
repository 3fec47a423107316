use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{FeatureCache, Gender, UtteranceRecord};
use crate::error::{Error, Result};
use crate::sphmm::FusionConfig;

use super::{one_stage_identify, two_stage_identify, ModelBank};

/// Everything the recognizers said about one utterance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtteranceResult {
    pub id: String,
    pub true_speaker: Option<String>,
    pub true_emotion: Option<String>,
    pub gender: Option<Gender>,
    pub identified_emotion: String,
    pub identified_speaker: String,
    pub one_stage_speaker: Option<String>,
    pub emotion_scores: Vec<f64>,
    pub speaker_scores: Vec<f64>,
    /// Empty when the one-stage recognizer was not run.
    pub one_stage_scores: Vec<f64>,
}

/// Runs the two-stage recognizer, and the one-stage baseline when the bank has it, on
/// every record. Output order follows `records`.
pub fn identify_records(
    records: &[UtteranceRecord],
    cache: &FeatureCache,
    bank: &ModelBank,
    cfg: &FusionConfig,
) -> Result<Vec<UtteranceResult>> {
    records
        .par_iter()
        .map(|r| {
            let utt = cache.get(&r.id)?;
            let two = two_stage_identify(utt, bank, cfg)?;
            let (one_stage_speaker, one_stage_scores) = if bank.has_one_stage_models() {
                let (s, scores) = one_stage_identify(&utt.features, bank)?;
                (Some(bank.speakers()[s].clone()), scores)
            } else {
                (None, Vec::new())
            };
            Ok(UtteranceResult {
                id: r.id.clone(),
                true_speaker: Some(r.speaker.clone()),
                true_emotion: Some(r.emotion.clone()),
                gender: Some(r.gender),
                identified_emotion: two.identified_emotion,
                identified_speaker: two.identified_speaker,
                one_stage_speaker,
                emotion_scores: two.emotion_scores,
                speaker_scores: two.speaker_scores,
                one_stage_scores,
            })
        })
        .collect()
}

/// Fixed leading columns of a results file; score columns follow, named
/// `emotion_score:<emotion>`, `speaker_score:<speaker>` and `one_stage_score:<speaker>`.
pub const RESULTS_HEADER: [&str; 7] = [
    "id",
    "true_speaker",
    "true_emotion",
    "gender",
    "identified_emotion",
    "identified_speaker",
    "one_stage_speaker",
];

/// A results file: the bank's label order plus one row per utterance.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsTable {
    pub emotions: Vec<String>,
    pub speakers: Vec<String>,
    pub rows: Vec<UtteranceResult>,
}

impl ResultsTable {
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let ctx = path.display().to_string();
        let wrap = |e: csv::Error| Error::parse(&ctx, e);
        let mut w = csv::WriterBuilder::new().delimiter(b'\t').from_path(path).map_err(wrap)?;
        let with_one_stage = self.rows.iter().any(|r| !r.one_stage_scores.is_empty());
        let mut header: Vec<String> = RESULTS_HEADER.iter().map(|s| s.to_string()).collect();
        header.extend(self.emotions.iter().map(|e| format!("emotion_score:{e}")));
        header.extend(self.speakers.iter().map(|s| format!("speaker_score:{s}")));
        if with_one_stage {
            header.extend(self.speakers.iter().map(|s| format!("one_stage_score:{s}")));
        }
        w.write_record(&header).map_err(wrap)?;
        for r in &self.rows {
            if r.emotion_scores.len() != self.emotions.len()
                || r.speaker_scores.len() != self.speakers.len()
                || (with_one_stage && r.one_stage_scores.len() != self.speakers.len())
            {
                return Err(Error::InvalidSpec(format!("score count mismatch for {}", r.id)));
            }
            let mut row = vec![
                r.id.clone(),
                r.true_speaker.clone().unwrap_or_default(),
                r.true_emotion.clone().unwrap_or_default(),
                r.gender.map(|g| g.as_str().to_string()).unwrap_or_default(),
                r.identified_emotion.clone(),
                r.identified_speaker.clone(),
                r.one_stage_speaker.clone().unwrap_or_default(),
            ];
            row.extend(
                r.emotion_scores
                    .iter()
                    .chain(&r.speaker_scores)
                    .chain(&r.one_stage_scores)
                    .map(|x| x.to_string()),
            );
            w.write_record(&row).map_err(wrap)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let ctx = path.display().to_string();
        let mut r = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .from_path(path)
            .map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::io(path, io),
                other => Error::parse(&ctx, format!("{other:?}")),
            })?;
        let header: Vec<String> = r.headers().map_err(|e| Error::parse(&ctx, e))?.iter().map(String::from).collect();
        if header.len() < RESULTS_HEADER.len() || header[..RESULTS_HEADER.len()] != RESULTS_HEADER {
            return Err(Error::parse(&ctx, "results header does not start with the fixed columns"));
        }
        let mut emotions = Vec::new();
        let mut speakers = Vec::new();
        let mut one_stage = Vec::new();
        for col in &header[RESULTS_HEADER.len()..] {
            if let Some(e) = col.strip_prefix("emotion_score:") {
                emotions.push(e.to_string());
            } else if let Some(s) = col.strip_prefix("speaker_score:") {
                speakers.push(s.to_string());
            } else if let Some(s) = col.strip_prefix("one_stage_score:") {
                one_stage.push(s.to_string());
            } else {
                return Err(Error::parse(&ctx, format!("unknown column {col}")));
            }
        }
        if !one_stage.is_empty() && one_stage != speakers {
            return Err(Error::parse(&ctx, "one-stage score columns do not match speaker columns"));
        }
        let opt = |s: &str| Some(s.to_string()).filter(|s| !s.is_empty());
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::parse(&ctx, e))?;
            let scores: Vec<f64> = rec
                .iter()
                .skip(RESULTS_HEADER.len())
                .map(|v| v.parse::<f64>().map_err(|e| Error::parse(&ctx, format!("score {v:?}: {e}"))))
                .collect::<Result<_>>()?;
            let (e_n, s_n) = (emotions.len(), speakers.len());
            rows.push(UtteranceResult {
                id: rec[0].to_string(),
                true_speaker: opt(&rec[1]),
                true_emotion: opt(&rec[2]),
                gender: opt(&rec[3]).map(|g| g.parse()).transpose()?,
                identified_emotion: rec[4].to_string(),
                identified_speaker: rec[5].to_string(),
                one_stage_speaker: opt(&rec[6]),
                emotion_scores: scores[..e_n].to_vec(),
                speaker_scores: scores[e_n..e_n + s_n].to_vec(),
                one_stage_scores: scores[e_n + s_n..].to_vec(),
            });
        }
        Ok(Self { emotions, speakers, rows })
    }
}
