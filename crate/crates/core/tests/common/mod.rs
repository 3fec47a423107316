#![allow(dead_code)]

use emocue::hmm::{GaussianMixture, LtrHmm};
use emocue::sphmm::{SupraMapping, SuprasegmentalModel, SUPRA_DIM};
use emocue::{FeatureSequence, ProsodicTrack, Utterance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_model(rng: &mut ChaCha8Rng, n: usize, m: usize, dim: usize) -> LtrHmm {
    let loops: Vec<f64> = (0..n).map(|_| rng.random_range(0.3..0.9)).collect();
    let states = (0..n)
        .map(|_| {
            let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            GaussianMixture {
                weights: raw.iter().map(|w| w / sum).collect(),
                means: (0..m).map(|_| (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect()).collect(),
                variances: (0..m).map(|_| (0..dim).map(|_| rng.random_range(0.5..2.0)).collect()).collect(),
            }
        })
        .collect();
    LtrHmm::new(LtrHmm::ltr_transitions(&loops), states, 1e-4).unwrap()
}

/// A prosodic model with plausible scales for segment summaries.
pub fn random_supra(rng: &mut ChaCha8Rng, mapping: SupraMapping) -> SuprasegmentalModel {
    let scale = [150.0, 1.0, 10.0, 0.1, 0.5];
    let spread = [900.0, 1.0, 4.0, 0.01, 0.1];
    let states = (0..mapping.num_groups())
        .map(|_| GaussianMixture {
            weights: vec![1.0],
            means: vec![(0..SUPRA_DIM).map(|d| scale[d] * rng.random_range(0.5..1.5)).collect()],
            variances: vec![spread.to_vec()],
        })
        .collect();
    let hmm = LtrHmm::new(LtrHmm::ltr_transitions(&vec![0.5; mapping.num_groups()]), states, 1e-4).unwrap();
    SuprasegmentalModel::new(hmm, mapping).unwrap()
}

pub fn random_utterance(rng: &mut ChaCha8Rng, len: usize, dim: usize) -> Utterance {
    let features = FeatureSequence::new(dim, (0..len * dim).map(|_| rng.random_range(-3.0..3.0)).collect()).unwrap();
    let voiced: Vec<bool> = (0..len).map(|_| rng.random_bool(0.7)).collect();
    let prosody = ProsodicTrack {
        f0: voiced.iter().map(|&v| if v { rng.random_range(100.0..250.0) } else { 0.0 }).collect(),
        log_energy: (0..len).map(|_| rng.random_range(5.0..15.0)).collect(),
        voiced,
    };
    Utterance::new(features, prosody).unwrap()
}
