//! Synthetic corpora with known generators.
//!
//! Each (speaker, emotion) pair gets a left-to-right acoustic generator and a prosodic
//! profile. All class offsets are standard-normal draws scaled by `separation` times the
//! within-class standard deviation of the feature they shift, so `separation = 0` makes
//! every generator identical.
//!
//! The acoustic state means mix a speaker-constant signature with one of `n_speakers`
//! shared voice prototypes; each emotion assigns prototypes to speakers by its own
//! permutation (the first emotion uses the identity). `speaker_constancy` is the weight
//! of the constant part. At zero, the pooled acoustics of every emotion are the same
//! mixture of prototypes and only prosody reveals the emotion, while knowing the
//! emotion is what makes speaker models sharp.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{ProsodicTrack, Utterance};
use crate::hmm::{GaussianMixture, LtrHmm};

use super::{write_manifest, FeatureCache, Gender, UtteranceRecord, DEFAULT_EMOTIONS};

// Within-class standard deviations.
const F0_UTTERANCE_SD: f64 = 8.0;
const F0_FRAME_SD: f64 = 4.0;
const F0_SLOPE_SD: f64 = 0.3;
const ENERGY_UTTERANCE_SD: f64 = 0.5;
const ENERGY_FRAME_SD: f64 = 0.3;
const LOG_TEMPO_SD: f64 = 0.1;
const VOICING_LOGIT_SD: f64 = 0.5;
const DURATION_JITTER: f64 = 0.2;

const F0_CENTRE: f64 = 150.0;
const ENERGY_CENTRE: f64 = 10.0;
const VOICING_LOGIT_CENTRE: f64 = 1.5;
const GENDER_F0_SHIFT: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n_speakers: usize,
    pub emotions: Vec<String>,
    pub train_sentences: u32,
    pub test_sentences: u32,
    pub repetitions: u32,
    pub separation: f64,
    pub seed: u64,
    pub num_states: usize,
    pub dim: usize,
    pub frames_per_state: f64,
    pub speaker_constancy: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_speakers: 5,
            emotions: DEFAULT_EMOTIONS.iter().map(|s| s.to_string()).collect(),
            train_sentences: 4,
            test_sentences: 4,
            repetitions: 3,
            separation: 6.0,
            seed: 1,
            num_states: 9,
            dim: 16,
            frames_per_state: 10.0,
            speaker_constancy: 0.5,
        }
    }
}

impl SynthSpec {
    /// Acoustics carry no emotion information; prosody carries all of it.
    pub fn prosody_dominant() -> Self {
        Self {
            speaker_constancy: 0.0,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if self.n_speakers == 0 {
            return bad("need at least one speaker");
        }
        if self.emotions.is_empty() {
            return bad("need at least one emotion");
        }
        let mut seen = self.emotions.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.emotions.len() {
            return bad("emotion labels must be distinct");
        }
        if !(self.separation >= 0.0) || !self.separation.is_finite() {
            return bad("separation must be a finite non-negative number");
        }
        if self.train_sentences + self.test_sentences == 0 || self.repetitions == 0 {
            return bad("need at least one sentence and one repetition");
        }
        if self.num_states == 0 || self.dim == 0 || !(self.frames_per_state >= 1.0) {
            return bad("need at least one state, one dimension and one frame per state");
        }
        if !(0.0..=1.0).contains(&self.speaker_constancy) {
            return bad("speaker_constancy must lie in [0, 1]");
        }
        Ok(())
    }

    pub fn speaker_id(i: usize) -> String {
        format!("spk{:02}", i + 1)
    }

    pub fn gender(i: usize) -> Gender {
        if i.is_multiple_of(2) {
            Gender::Male
        } else {
            Gender::Female
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProsodicProfile {
    pub f0_base: f64,
    /// Hz per frame, one per acoustic state.
    pub f0_slopes: Vec<f64>,
    /// Mean log energy, one per acoustic state.
    pub energy: Vec<f64>,
    /// Multiplier on the nominal frames per state.
    pub tempo: f64,
    pub voicing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthGenerator {
    pub speaker: String,
    pub emotion: String,
    pub acoustic: LtrHmm,
    pub prosody: ProsodicProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCorpus {
    pub spec: SynthSpec,
    pub records: Vec<UtteranceRecord>,
    pub features: FeatureCache,
    /// Speaker-major: `generators[speaker * num_emotions + emotion]`.
    pub generators: Vec<SynthGenerator>,
}

pub const GENERATORS_KIND: &str = "synthetic-generators";

impl SyntheticCorpus {
    pub fn generator(&self, speaker: usize, emotion: usize) -> &SynthGenerator {
        &self.generators[speaker * self.spec.emotions.len() + emotion]
    }

    /// Writes `manifest.tsv`, `features.json` and `generators.json` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_manifest(dir.join("manifest.tsv"), &self.records)?;
        self.features.save(dir.join("features.json"))?;
        crate::persist::save(dir.join("generators.json"), GENERATORS_KIND, &(&self.spec, &self.generators))
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn gaussian_vectors<R: Rng + ?Sized>(rng: &mut R, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..dim).map(|_| normal(rng)).collect()).collect()
}

fn build_generators(spec: &SynthSpec, rng: &mut ChaCha8Rng) -> Result<Vec<SynthGenerator>> {
    let n = spec.n_speakers;
    let states = spec.num_states;
    let sep = spec.separation;
    // Speaker-constant signatures and shared prototypes, one vector per state.
    let signatures: Vec<Vec<Vec<f64>>> = (0..n).map(|_| gaussian_vectors(rng, states, spec.dim)).collect();
    let prototypes: Vec<Vec<Vec<f64>>> = (0..n).map(|_| gaussian_vectors(rng, states, spec.dim)).collect();
    let permutations: Vec<Vec<usize>> = (0..spec.emotions.len())
        .map(|e| {
            let mut p: Vec<usize> = (0..n).collect();
            if e > 0 {
                p.shuffle(rng);
            }
            p
        })
        .collect();

    struct EmotionProsody {
        f0: f64,
        slopes: Vec<f64>,
        energy: Vec<f64>,
        log_tempo: f64,
        voicing_logit: f64,
    }
    let emotion_prosody: Vec<EmotionProsody> = (0..spec.emotions.len())
        .map(|_| EmotionProsody {
            f0: normal(rng),
            slopes: (0..states).map(|_| normal(rng)).collect(),
            energy: (0..states).map(|_| normal(rng)).collect(),
            log_tempo: normal(rng),
            voicing_logit: normal(rng),
        })
        .collect();
    let speaker_f0: Vec<f64> = (0..n).map(|_| 0.5 * normal(rng)).collect();

    let constant = spec.speaker_constancy;
    let shared = (1.0 - constant * constant).sqrt();
    let mut out = Vec::with_capacity(n * spec.emotions.len());
    for s in 0..n {
        let gender_sign = match SynthSpec::gender(s) {
            Gender::Male => -1.0,
            Gender::Female => 1.0,
        };
        for (e, emotion) in spec.emotions.iter().enumerate() {
            let ep = &emotion_prosody[e];
            let proto = &prototypes[permutations[e][s]];
            let tempo = (sep * LOG_TEMPO_SD * ep.log_tempo).exp();
            let frames = (spec.frames_per_state * tempo).max(1.0);
            let mixtures = (0..states)
                .map(|j| {
                    let mean = signatures[s][j]
                        .iter()
                        .zip(&proto[j])
                        .map(|(u, p)| sep * (constant * u + shared * p))
                        .collect();
                    GaussianMixture::single(mean, vec![1.0; spec.dim])
                })
                .collect();
            let acoustic = LtrHmm::new(
                LtrHmm::ltr_transitions(&vec![1.0 - 1.0 / frames; states]),
                mixtures,
                1e-4,
            )?;
            let prosody = ProsodicProfile {
                f0_base: F0_CENTRE
                    + sep * F0_UTTERANCE_SD * (GENDER_F0_SHIFT * gender_sign + speaker_f0[s] + ep.f0),
                f0_slopes: ep.slopes.iter().map(|z| sep * F0_SLOPE_SD * z).collect(),
                energy: ep.energy.iter().map(|z| ENERGY_CENTRE + sep * ENERGY_UTTERANCE_SD * z).collect(),
                tempo,
                voicing: sigmoid(VOICING_LOGIT_CENTRE + sep * VOICING_LOGIT_SD * ep.voicing_logit),
            };
            out.push(SynthGenerator {
                speaker: SynthSpec::speaker_id(s),
                emotion: emotion.clone(),
                acoustic,
                prosody,
            });
        }
    }
    Ok(out)
}

fn sample_utterance(gen: &SynthGenerator, spec: &SynthSpec, rng: &mut ChaCha8Rng) -> Result<Utterance> {
    let p = &gen.prosody;
    let nominal = spec.frames_per_state * p.tempo;
    let mut path = Vec::new();
    for j in 0..spec.num_states {
        let d = (nominal * (DURATION_JITTER * normal(rng)).exp()).round().max(2.0) as usize;
        path.extend(std::iter::repeat_n(j, d));
    }
    let features = gen.acoustic.emit(&path, rng);
    let f0_offset = F0_UTTERANCE_SD * normal(rng);
    let energy_offset = ENERGY_UTTERANCE_SD * normal(rng);
    let mut track = ProsodicTrack {
        f0: Vec::with_capacity(path.len()),
        log_energy: Vec::with_capacity(path.len()),
        voiced: Vec::with_capacity(path.len()),
    };
    let mut seg_start = 0;
    for (t, &j) in path.iter().enumerate() {
        if t > 0 && path[t - 1] != j {
            seg_start = t;
        }
        let voiced = rng.random::<f64>() < p.voicing;
        let f0 = p.f0_base + f0_offset + p.f0_slopes[j] * (t - seg_start) as f64 + F0_FRAME_SD * normal(rng);
        track.voiced.push(voiced);
        track.f0.push(if voiced { f0.clamp(60.0, 400.0) } else { 0.0 });
        track.log_energy.push(p.energy[j] + energy_offset + ENERGY_FRAME_SD * normal(rng));
    }
    Utterance::new(features, track)
}

/// Generates a corpus of `n_speakers x emotions x (train + test sentences) x repetitions`
/// utterances. Sentences `1..=train_sentences` come first, so the default split protocol
/// applies when both counts are four. Identical specs produce identical corpora.
pub fn synthesize_corpus(spec: &SynthSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let generators = build_generators(spec, &mut rng)?;
    let sentences = spec.train_sentences + spec.test_sentences;
    let mut records = Vec::new();
    let mut owners = Vec::new();
    for s in 0..spec.n_speakers {
        for (e, emotion) in spec.emotions.iter().enumerate() {
            for sentence in 1..=sentences {
                for repetition in 1..=spec.repetitions {
                    records.push(UtteranceRecord {
                        id: format!("{}_{}_t{}_r{}", SynthSpec::speaker_id(s), emotion, sentence, repetition),
                        speaker: SynthSpec::speaker_id(s),
                        gender: SynthSpec::gender(s),
                        emotion: emotion.clone(),
                        sentence,
                        repetition,
                        audio: None,
                    });
                    owners.push(s * spec.emotions.len() + e);
                }
            }
        }
    }
    // One independent stream per record keeps generation order-free and parallel.
    let utterances: Vec<Utterance> = owners
        .par_iter()
        .enumerate()
        .map(|(i, &g)| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(i as u64 + 1);
            sample_utterance(&generators[g], spec, &mut rng)
        })
        .collect::<Result<_>>()?;
    let features = FeatureCache {
        utterances: records
            .iter()
            .map(|r| r.id.clone())
            .zip(utterances)
            .collect::<BTreeMap<_, _>>(),
    };
    Ok(SyntheticCorpus {
        spec: spec.clone(),
        records,
        features,
        generators,
    })
}
