use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::DEFAULT_EMOTIONS;

/// Column names of the tab-separated manifest, in order.
pub const MANIFEST_HEADER: [&str; 7] = [
    "id",
    "speaker",
    "gender",
    "emotion",
    "sentence",
    "repetition",
    "audio",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Gender {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "male" => Ok(Gender::Male),
            "female" => Ok(Gender::Female),
            other => Err(Error::UnknownLabel {
                field: "gender",
                value: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtteranceRecord {
    pub id: String,
    pub speaker: String,
    pub gender: Gender,
    pub emotion: String,
    pub sentence: u32,
    pub repetition: u32,
    /// WAV file to extract features from; `None` when the features live only in a
    /// feature cache under this record's id.
    pub audio: Option<PathBuf>,
}

impl UtteranceRecord {
    fn key(&self) -> (&str, &str, u32, u32) {
        (&self.speaker, &self.emotion, self.sentence, self.repetition)
    }
}

/// Label sets a manifest is validated against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusLabels {
    pub emotions: Vec<String>,
    pub sentences: RangeInclusive<u32>,
    pub repetitions: RangeInclusive<u32>,
}

impl Default for CorpusLabels {
    /// Six emotions, eight sentences, nine repetitions.
    fn default() -> Self {
        Self {
            emotions: DEFAULT_EMOTIONS.iter().map(|s| s.to_string()).collect(),
            sentences: 1..=8,
            repetitions: 1..=9,
        }
    }
}

fn parse_index(field: &'static str, value: &str, range: &RangeInclusive<u32>) -> Result<u32> {
    let v: u32 = value.parse().map_err(|_| Error::UnknownLabel {
        field,
        value: value.to_string(),
    })?;
    if !range.contains(&v) {
        return Err(Error::UnknownLabel {
            field,
            value: value.to_string(),
        });
    }
    Ok(v)
}

/// Parses a manifest from any reader. See [`load_manifest`] for the format.
pub fn parse_manifest<R: Read>(reader: R, labels: &CorpusLabels, context: &str) -> Result<Vec<UtteranceRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .from_reader(reader);
    let mut rows = rdr.records();
    let Some(header) = rows.next() else {
        return Ok(Vec::new());
    };
    let header = header.map_err(|e| Error::parse(context, e))?;
    if header.iter().ne(MANIFEST_HEADER.iter().copied()) {
        return Err(Error::parse(
            context,
            format!("header must be `{}`", MANIFEST_HEADER.join("\\t")),
        ));
    }
    let mut records = Vec::new();
    let mut keys = HashSet::new();
    let mut ids = HashSet::new();
    for (line, row) in rows.enumerate() {
        let row = row.map_err(|e| Error::parse(context, e))?;
        if row.len() != MANIFEST_HEADER.len() {
            return Err(Error::parse(
                context,
                format!("line {}: expected {} fields, found {}", line + 2, MANIFEST_HEADER.len(), row.len()),
            ));
        }
        let emotion = row[3].to_string();
        if !labels.emotions.contains(&emotion) {
            return Err(Error::UnknownLabel {
                field: "emotion",
                value: emotion,
            });
        }
        if row[0].is_empty() || row[1].is_empty() {
            return Err(Error::parse(context, format!("line {}: empty id or speaker", line + 2)));
        }
        let record = UtteranceRecord {
            id: row[0].to_string(),
            speaker: row[1].to_string(),
            gender: row[2].parse()?,
            emotion,
            sentence: parse_index("sentence", &row[4], &labels.sentences)?,
            repetition: parse_index("repetition", &row[5], &labels.repetitions)?,
            audio: (!row[6].is_empty()).then(|| PathBuf::from(&row[6])),
        };
        if !ids.insert(record.id.clone()) {
            return Err(Error::DuplicateUtterance(format!("id {}", record.id)));
        }
        let key = record.key();
        if !keys.insert((key.0.to_string(), key.1.to_string(), key.2, key.3)) {
            return Err(Error::DuplicateUtterance(format!(
                "speaker {} emotion {} sentence {} repetition {}",
                key.0, key.1, key.2, key.3
            )));
        }
        records.push(record);
    }
    Ok(records)
}

/// Reads a UTF-8, tab-separated manifest: one header line
/// `id speaker gender emotion sentence repetition audio`, then one utterance per line.
/// `audio` may be empty for utterances whose features come from a feature cache.
/// A zero-byte file is an empty corpus.
pub fn load_manifest(path: impl AsRef<Path>, labels: &CorpusLabels) -> Result<Vec<UtteranceRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let records = parse_manifest(std::io::BufReader::new(file), labels, &path.display().to_string())?;
    // Relative audio paths are taken relative to the manifest's directory.
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(records
        .into_iter()
        .map(|mut r| {
            if let Some(a) = &r.audio {
                if a.is_relative() {
                    r.audio = Some(base.join(a));
                }
            }
            r
        })
        .collect())
}

pub fn write_manifest(path: impl AsRef<Path>, records: &[UtteranceRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::WriterBuilder::new()
        .delimiter(b'\t')
        .from_path(path)
        .map_err(|e| Error::parse(path.display().to_string(), e))?;
    let wrap = |e: csv::Error| Error::parse(path.display().to_string(), e);
    w.write_record(MANIFEST_HEADER).map_err(wrap)?;
    for r in records {
        let sentence = r.sentence.to_string();
        let repetition = r.repetition.to_string();
        let audio = r.audio.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        w.write_record([
            r.id.as_str(),
            &r.speaker,
            r.gender.as_str(),
            &r.emotion,
            &sentence,
            &repetition,
            &audio,
        ])
        .map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
