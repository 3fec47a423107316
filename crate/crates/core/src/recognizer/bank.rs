use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hmm::AcousticModel;
use crate::sphmm::SuprasegmentalModel;

/// The acoustic and prosodic models of one emotion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionModel {
    pub acoustic: AcousticModel,
    pub supra: SuprasegmentalModel,
}

/// Every model the recognizers need. Immutable once built.
///
/// Any of the three model groups may be absent, so that banks can be assembled from
/// separately trained parts; the identification calls that need a missing group fail
/// with [`Error::EmptyBank`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBank {
    emotions: Vec<String>,
    speakers: Vec<String>,
    emotion_models: Vec<EmotionModel>,
    /// `speaker_models[e][s]`, empty when absent.
    speaker_models: Vec<Vec<AcousticModel>>,
    one_stage_models: Vec<AcousticModel>,
}

fn check_distinct(labels: &[String], what: &str) -> Result<()> {
    let mut sorted: Vec<&String> = labels.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidModel(format!("duplicate {what} label in bank")));
    }
    Ok(())
}

impl ModelBank {
    pub fn new(
        emotions: Vec<String>,
        speakers: Vec<String>,
        emotion_models: Vec<EmotionModel>,
        speaker_models: Vec<Vec<AcousticModel>>,
        one_stage_models: Vec<AcousticModel>,
    ) -> Result<Self> {
        check_distinct(&emotions, "emotion")?;
        check_distinct(&speakers, "speaker")?;
        if !emotion_models.is_empty() && emotion_models.len() != emotions.len() {
            return Err(Error::InvalidModel(format!(
                "{} emotion models for {} emotions",
                emotion_models.len(),
                emotions.len()
            )));
        }
        if !speaker_models.is_empty()
            && (speaker_models.len() != emotions.len() || speaker_models.iter().any(|row| row.len() != speakers.len()))
        {
            return Err(Error::InvalidModel(format!(
                "speaker models must cover all {} x {} (speaker, emotion) pairs",
                speakers.len(),
                emotions.len()
            )));
        }
        if !one_stage_models.is_empty() && one_stage_models.len() != speakers.len() {
            return Err(Error::InvalidModel(format!(
                "{} one-stage models for {} speakers",
                one_stage_models.len(),
                speakers.len()
            )));
        }
        let mut dims = emotion_models
            .iter()
            .map(|m| m.acoustic.dim())
            .chain(speaker_models.iter().flatten().map(|m| m.dim()))
            .chain(one_stage_models.iter().map(|m| m.dim()));
        if let Some(first) = dims.next() {
            if let Some(other) = dims.find(|&d| d != first) {
                return Err(Error::DimensionMismatch {
                    expected: first,
                    actual: other,
                });
            }
        }
        Ok(Self {
            emotions,
            speakers,
            emotion_models,
            speaker_models,
            one_stage_models,
        })
    }

    pub fn emotions(&self) -> &[String] {
        &self.emotions
    }

    pub fn speakers(&self) -> &[String] {
        &self.speakers
    }

    pub fn emotion_models(&self) -> &[EmotionModel] {
        &self.emotion_models
    }

    pub fn one_stage_models(&self) -> &[AcousticModel] {
        &self.one_stage_models
    }

    pub fn has_emotion_models(&self) -> bool {
        !self.emotion_models.is_empty()
    }

    pub fn has_speaker_models(&self) -> bool {
        !self.speaker_models.is_empty() && !self.speakers.is_empty()
    }

    pub fn has_one_stage_models(&self) -> bool {
        !self.one_stage_models.is_empty()
    }

    pub fn emotion_index(&self, emotion: &str) -> Result<usize> {
        self.emotions
            .iter()
            .position(|e| e == emotion)
            .ok_or_else(|| Error::UnknownEmotion(emotion.to_string()))
    }

    pub fn speaker_index(&self, speaker: &str) -> Result<usize> {
        self.speakers
            .iter()
            .position(|s| s == speaker)
            .ok_or_else(|| Error::UnknownSpeaker(speaker.to_string()))
    }

    /// The speaker models trained on one emotion, in speaker order.
    pub fn speaker_models_for(&self, emotion: usize) -> &[AcousticModel] {
        self.speaker_models.get(emotion).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn speaker_model(&self, speaker: usize, emotion: usize) -> Option<&AcousticModel> {
        self.speaker_models.get(emotion).and_then(|row| row.get(speaker))
    }

    /// Writes every model into `dir` and returns the manifest describing them.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<BankManifest> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut manifest = BankManifest::default();
        manifest.merge(write_emotion_models(dir, &self.emotions, &self.emotion_models)?);
        if self.has_speaker_models() {
            manifest.merge(write_speaker_models(dir, &self.emotions, &self.speakers, &self.speaker_models)?);
        }
        manifest.merge(write_one_stage_models(dir, &self.speakers, &self.one_stage_models)?);
        manifest.write(dir.join(BANK_MANIFEST))?;
        Ok(manifest)
    }

    /// Loads the models named by a bank manifest. Relative paths resolve against the
    /// manifest's directory. Emotion order is the order of first mention in the
    /// emotion rows, then the speaker rows; speaker order likewise from the speaker
    /// rows, then the one-stage rows.
    pub fn load(manifest_path: impl AsRef<Path>) -> Result<Self> {
        let manifest_path = manifest_path.as_ref();
        let manifest = BankManifest::read(manifest_path)?;
        let base = manifest_path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &Path| if p.is_relative() { base.join(p) } else { p.to_path_buf() };

        let mut emotions: Vec<String> = Vec::new();
        let mut speakers: Vec<String> = Vec::new();
        let push = |list: &mut Vec<String>, v: &str| {
            if !list.iter().any(|x| x == v) {
                list.push(v.to_string());
            }
        };
        for role in [ModelRole::EmotionAcoustic, ModelRole::EmotionProsodic, ModelRole::Speaker] {
            for e in manifest.entries.iter().filter(|e| e.role == role) {
                push(&mut emotions, e.emotion.as_deref().unwrap_or_default());
            }
        }
        for role in [ModelRole::Speaker, ModelRole::OneStage] {
            for e in manifest.entries.iter().filter(|e| e.role == role) {
                push(&mut speakers, e.speaker.as_deref().unwrap_or_default());
            }
        }

        let find = |role: ModelRole, emotion: Option<&str>, speaker: Option<&str>| {
            manifest
                .entries
                .iter()
                .find(|e| e.role == role && e.emotion.as_deref() == emotion && e.speaker.as_deref() == speaker)
        };
        let missing = |what: String| Error::InvalidModel(format!("bank manifest has no {what}"));

        let mut emotion_models = Vec::new();
        if manifest.entries.iter().any(|e| e.role == ModelRole::EmotionAcoustic) {
            for emo in &emotions {
                let a = find(ModelRole::EmotionAcoustic, Some(emo), None)
                    .ok_or_else(|| missing(format!("acoustic model for emotion {emo}")))?;
                let p = find(ModelRole::EmotionProsodic, Some(emo), None)
                    .ok_or_else(|| missing(format!("prosodic model for emotion {emo}")))?;
                emotion_models.push(EmotionModel {
                    acoustic: AcousticModel::load(resolve(&a.path))?,
                    supra: SuprasegmentalModel::load(resolve(&p.path))?,
                });
            }
        }
        let mut speaker_models = Vec::new();
        if manifest.entries.iter().any(|e| e.role == ModelRole::Speaker) {
            for emo in &emotions {
                let mut row = Vec::with_capacity(speakers.len());
                for spk in &speakers {
                    let entry = find(ModelRole::Speaker, Some(emo), Some(spk))
                        .ok_or_else(|| missing(format!("speaker model for ({spk}, {emo})")))?;
                    row.push(AcousticModel::load(resolve(&entry.path))?);
                }
                speaker_models.push(row);
            }
        }
        let mut one_stage_models = Vec::new();
        if manifest.entries.iter().any(|e| e.role == ModelRole::OneStage) {
            for spk in &speakers {
                let entry = find(ModelRole::OneStage, None, Some(spk))
                    .ok_or_else(|| missing(format!("one-stage model for speaker {spk}")))?;
                one_stage_models.push(AcousticModel::load(resolve(&entry.path))?);
            }
        }
        Self::new(emotions, speakers, emotion_models, speaker_models, one_stage_models)
    }
}

/// Default file name of a bank manifest inside a model directory.
pub const BANK_MANIFEST: &str = "bank.tsv";
pub const BANK_MANIFEST_HEADER: [&str; 4] = ["role", "emotion", "speaker", "path"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelRole {
    EmotionAcoustic,
    EmotionProsodic,
    Speaker,
    OneStage,
}

impl ModelRole {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelRole::EmotionAcoustic => "emotion-acoustic",
            ModelRole::EmotionProsodic => "emotion-prosodic",
            ModelRole::Speaker => "speaker",
            ModelRole::OneStage => "one-stage",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "emotion-acoustic" => ModelRole::EmotionAcoustic,
            "emotion-prosodic" => ModelRole::EmotionProsodic,
            "speaker" => ModelRole::Speaker,
            "one-stage" => ModelRole::OneStage,
            other => {
                return Err(Error::UnknownLabel {
                    field: "role",
                    value: other.to_string(),
                })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BankEntry {
    pub role: ModelRole,
    pub emotion: Option<String>,
    pub speaker: Option<String>,
    pub path: PathBuf,
}

/// Tab-separated list of model files and their roles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BankManifest {
    pub entries: Vec<BankEntry>,
}

impl BankManifest {
    /// Reads a manifest; a missing file is an error, use [`BankManifest::read_or_default`]
    /// when building one up incrementally.
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
        let header = r.headers().map_err(|e| Error::parse(&ctx, e))?;
        if header.iter().ne(BANK_MANIFEST_HEADER) {
            return Err(Error::parse(&ctx, format!("expected header {:?}", BANK_MANIFEST_HEADER.join("\t"))));
        }
        let mut entries = Vec::new();
        for row in r.records() {
            let row = row.map_err(|e| Error::parse(&ctx, e))?;
            let opt = |i: usize| Some(row[i].to_string()).filter(|s| !s.is_empty());
            let entry = BankEntry {
                role: ModelRole::parse(&row[0])?,
                emotion: opt(1),
                speaker: opt(2),
                path: PathBuf::from(&row[3]),
            };
            let needs = match entry.role {
                ModelRole::EmotionAcoustic | ModelRole::EmotionProsodic => (true, false),
                ModelRole::Speaker => (true, true),
                ModelRole::OneStage => (false, true),
            };
            if (entry.emotion.is_some(), entry.speaker.is_some()) != needs {
                return Err(Error::parse(
                    &ctx,
                    format!("row for {} has the wrong emotion/speaker fields", entry.role.as_str()),
                ));
            }
            entries.push(entry);
        }
        Ok(Self { entries })
    }

    pub fn read_or_default(path: impl AsRef<Path>) -> Result<Self> {
        if path.as_ref().exists() {
            Self::read(path)
        } else {
            Ok(Self::default())
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let ctx = path.display().to_string();
        let mut w = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .from_path(path)
            .map_err(|e| Error::parse(&ctx, e))?;
        w.write_record(BANK_MANIFEST_HEADER).map_err(|e| Error::parse(&ctx, e))?;
        for e in &self.entries {
            w.write_record([
                e.role.as_str(),
                e.emotion.as_deref().unwrap_or(""),
                e.speaker.as_deref().unwrap_or(""),
                &e.path.display().to_string(),
            ])
            .map_err(|e| Error::parse(&ctx, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Replaces every entry whose role appears in `other` with `other`'s entries.
    pub fn merge(&mut self, other: BankManifest) {
        let roles: Vec<ModelRole> = other.entries.iter().map(|e| e.role).collect();
        self.entries.retain(|e| !roles.contains(&e.role));
        self.entries.extend(other.entries);
        self.entries.sort_by_key(|e| e.role);
    }
}

fn file_stem(parts: &[&str]) -> String {
    parts
        .iter()
        .map(|p| {
            p.chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// Saves emotion models as `emotion.<label>.acoustic.json` / `.prosodic.json` in `dir`.
pub fn write_emotion_models(dir: &Path, emotions: &[String], models: &[EmotionModel]) -> Result<BankManifest> {
    let mut entries = Vec::new();
    for (emotion, model) in emotions.iter().zip(models) {
        let acoustic = PathBuf::from(format!("{}.json", file_stem(&["emotion", emotion, "acoustic"])));
        let prosodic = PathBuf::from(format!("{}.json", file_stem(&["emotion", emotion, "prosodic"])));
        model.acoustic.save(dir.join(&acoustic))?;
        model.supra.save(dir.join(&prosodic))?;
        entries.push(BankEntry {
            role: ModelRole::EmotionAcoustic,
            emotion: Some(emotion.clone()),
            speaker: None,
            path: acoustic,
        });
        entries.push(BankEntry {
            role: ModelRole::EmotionProsodic,
            emotion: Some(emotion.clone()),
            speaker: None,
            path: prosodic,
        });
    }
    Ok(BankManifest { entries })
}

/// Saves `models[e][s]` as `speaker.<speaker>.<emotion>.json` in `dir`.
pub fn write_speaker_models(
    dir: &Path,
    emotions: &[String],
    speakers: &[String],
    models: &[Vec<AcousticModel>],
) -> Result<BankManifest> {
    let mut entries = Vec::new();
    for (emotion, row) in emotions.iter().zip(models) {
        for (speaker, model) in speakers.iter().zip(row) {
            let path = PathBuf::from(format!("{}.json", file_stem(&["speaker", speaker, emotion])));
            model.save(dir.join(&path))?;
            entries.push(BankEntry {
                role: ModelRole::Speaker,
                emotion: Some(emotion.clone()),
                speaker: Some(speaker.clone()),
                path,
            });
        }
    }
    Ok(BankManifest { entries })
}

/// Saves pooled speaker models as `onestage.<speaker>.json` in `dir`.
pub fn write_one_stage_models(dir: &Path, speakers: &[String], models: &[AcousticModel]) -> Result<BankManifest> {
    let mut entries = Vec::new();
    for (speaker, model) in speakers.iter().zip(models) {
        let path = PathBuf::from(format!("{}.json", file_stem(&["onestage", speaker])));
        model.save(dir.join(&path))?;
        entries.push(BankEntry {
            role: ModelRole::OneStage,
            emotion: None,
            speaker: Some(speaker.clone()),
            path,
        });
    }
    Ok(BankManifest { entries })
}
