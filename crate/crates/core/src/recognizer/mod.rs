//! The two-stage recognizer (emotion first, then speaker within that emotion) and the
//! emotion-independent one-stage baseline.

mod bank;
mod identify;
mod results;
mod train;

pub use bank::{
    write_emotion_models, write_one_stage_models, write_speaker_models, BankEntry, BankManifest, EmotionModel,
    ModelBank, ModelRole, BANK_MANIFEST, BANK_MANIFEST_HEADER,
};
pub use identify::{
    identify_emotion, identify_speaker_given_emotion, one_stage_identify, speaker_scores, two_stage_identify,
    IdentificationResult,
};
pub use results::{identify_records, ResultsTable, UtteranceResult, RESULTS_HEADER};
pub use train::{
    labelled, train_bank, train_emotion_models, train_one_stage_models, train_speaker_models, BankConfig,
    LabelledUtterance,
};
