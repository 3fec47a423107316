use std::path::Path;

use serde::Deserialize;

use emocue::corpus::{CorpusLabels, SplitProtocol, DEFAULT_EMOTIONS};
use emocue::hmm::TrainingConfig;
use emocue::recognizer::BankConfig;
use emocue::sphmm::{FusionConfig, SupraMapping};

use crate::error::CliError;
use crate::RunArgs;

/// Every tunable of a run. Read from an optional TOML file, then overridden by flags.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub states: usize,
    pub mixtures: usize,
    pub supra_mixtures: usize,
    pub supra_mapping: Vec<usize>,
    pub train_sentences: Vec<u32>,
    pub test_sentences: Vec<u32>,
    pub variance_floor: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub length_normalize: bool,
    pub emotions: Vec<String>,
    pub max_sentence: u32,
    pub max_repetition: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            states: 9,
            mixtures: 10,
            supra_mixtures: 3,
            supra_mapping: vec![3, 3, 3],
            train_sentences: vec![1, 2, 3, 4],
            test_sentences: vec![5, 6, 7, 8],
            variance_floor: 1e-4,
            tol: 1e-5,
            max_iters: 40,
            seed: 0,
            length_normalize: false,
            emotions: DEFAULT_EMOTIONS.iter().map(|s| s.to_string()).collect(),
            max_sentence: 8,
            max_repetition: 9,
        }
    }
}

impl RunConfig {
    pub fn load(file: Option<&Path>, args: &RunArgs) -> Result<Self, CliError> {
        let mut cfg = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
                toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = args.$f.clone() { cfg.$f = v; } )* };
        }
        set!(
            alpha, states, mixtures, supra_mixtures, supra_mapping, train_sentences, test_sentences,
            variance_floor, tol, max_iters, seed, length_normalize, emotions, max_sentence, max_repetition
        );
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.fusion()?;
        self.mapping()?;
        self.split()?;
        let bad = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.states == 0 || self.mixtures == 0 || self.supra_mixtures == 0 {
            return bad("states, mixtures and supra_mixtures must be positive");
        }
        if self.supra_mapping.iter().sum::<usize>() != self.states {
            return bad("supra_mapping group sizes must add up to states");
        }
        if !(self.variance_floor > 0.0) || !(self.tol >= 0.0) || self.max_iters == 0 {
            return bad("variance_floor must be positive, tol non-negative, max_iters positive");
        }
        if self.emotions.is_empty() {
            return bad("at least one emotion label is required");
        }
        Ok(())
    }

    pub fn fusion(&self) -> Result<FusionConfig, CliError> {
        FusionConfig::new(self.alpha, self.length_normalize).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn mapping(&self) -> Result<SupraMapping, CliError> {
        SupraMapping::new(self.supra_mapping.clone()).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn split(&self) -> Result<SplitProtocol, CliError> {
        SplitProtocol::new(self.train_sentences.iter().copied(), self.test_sentences.iter().copied())
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn labels(&self) -> CorpusLabels {
        CorpusLabels {
            emotions: self.emotions.clone(),
            sentences: 1..=self.max_sentence,
            repetitions: 1..=self.max_repetition,
        }
    }

    pub fn bank(&self) -> Result<BankConfig, CliError> {
        Ok(BankConfig {
            num_states: self.states,
            num_mixtures: self.mixtures,
            supra_mixtures: self.supra_mixtures,
            mapping: self.mapping()?,
            training: TrainingConfig {
                max_iters: self.max_iters,
                tol: self.tol,
                variance_floor: self.variance_floor,
            },
            seed: self.seed,
        })
    }
}
