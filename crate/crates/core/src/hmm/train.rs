use std::borrow::Borrow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureSequence;

use super::gmm::PreparedMixture;
use super::inference::{backward_pass, emission_table, forward_pass, log_transitions};
use super::kmeans::mixture_from_kmeans;
use super::{GaussianMixture, LtrHmm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub max_iters: usize,
    /// Stop once the relative total log-likelihood gain falls below this.
    pub tol: f64,
    pub variance_floor: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            max_iters: 40,
            tol: 1e-5,
            variance_floor: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    /// Total log-likelihood of the training set under the model entering each iteration,
    /// plus the final model.
    pub log_likelihood_per_iteration: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
}

fn check_training_set<S: Borrow<FeatureSequence>>(sequences: &[S], n_states: usize) -> Result<usize> {
    let first = sequences.first().ok_or(Error::EmptyTrainingSet)?.borrow();
    let dim = first.dim();
    for s in sequences {
        let s = s.borrow();
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: s.dim(),
            });
        }
        if s.len() < n_states {
            return Err(Error::SequenceTooShort {
                len: s.len(),
                states: n_states,
            });
        }
    }
    Ok(dim)
}

/// Builds a starting model by cutting every sequence into `n_states` equal contiguous
/// chunks and fitting each state's mixture to its chunk frames with k-means.
/// Transitions start at 0.5 stay / 0.5 advance.
pub fn init_model<S: Borrow<FeatureSequence>>(
    sequences: &[S],
    n_states: usize,
    n_mix: usize,
    variance_floor: f64,
    seed: u64,
) -> Result<LtrHmm> {
    let assignments: Vec<Vec<usize>> = sequences
        .iter()
        .map(|s| {
            let len = s.borrow().len();
            (0..len).map(|t| t * n_states / len.max(1)).collect()
        })
        .collect();
    init_model_from_assignments(sequences, &assignments, n_states, n_mix, variance_floor, seed)
}

/// Like [`init_model`], but with an explicit frame-to-state assignment per sequence.
/// Each assignment must be a legal LTR path (non-decreasing, unit steps, first to last state).
pub fn init_model_from_assignments<S: Borrow<FeatureSequence>>(
    sequences: &[S],
    assignments: &[Vec<usize>],
    n_states: usize,
    n_mix: usize,
    variance_floor: f64,
    seed: u64,
) -> Result<LtrHmm> {
    if n_states == 0 || n_mix == 0 {
        return Err(Error::InvalidModel("need at least one state and one mixture".into()));
    }
    check_training_set(sequences, n_states)?;
    let mut per_state: Vec<Vec<&[f64]>> = vec![Vec::new(); n_states];
    for (seq, assign) in sequences.iter().zip(assignments) {
        let seq = seq.borrow();
        if assign.len() != seq.len() {
            return Err(Error::LengthMismatch {
                path: assign.len(),
                track: seq.len(),
            });
        }
        for (t, &s) in assign.iter().enumerate() {
            if s >= n_states {
                return Err(Error::IllegalPath(format!("state {s} out of range")));
            }
            per_state[s].push(seq.frame(t));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = per_state
        .iter()
        .enumerate()
        .map(|(s, frames)| {
            if frames.is_empty() {
                return Err(Error::IllegalPath(format!("no frames assigned to state {s}")));
            }
            Ok(mixture_from_kmeans(frames, n_mix, variance_floor, &mut rng))
        })
        .collect::<Result<Vec<_>>>()?;
    LtrHmm::new(
        LtrHmm::ltr_transitions(&vec![0.5; n_states]),
        states,
        variance_floor,
    )
}

/// Sufficient statistics from one E-step.
struct Accumulator {
    log_likelihood: f64,
    stay: Vec<f64>,
    advance: Vec<f64>,
    occupancy: Vec<Vec<f64>>,
    sum_x: Vec<Vec<Vec<f64>>>,
    sum_xx: Vec<Vec<Vec<f64>>>,
}

impl Accumulator {
    fn new(model: &LtrHmm) -> Self {
        let n = model.num_states();
        let dim = model.dim();
        let mix: Vec<usize> = model.states().iter().map(GaussianMixture::num_components).collect();
        Self {
            log_likelihood: 0.0,
            stay: vec![0.0; n],
            advance: vec![0.0; n],
            occupancy: mix.iter().map(|&m| vec![0.0; m]).collect(),
            sum_x: mix.iter().map(|&m| vec![vec![0.0; dim]; m]).collect(),
            sum_xx: mix.iter().map(|&m| vec![vec![0.0; dim]; m]).collect(),
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        self.log_likelihood += other.log_likelihood;
        for (a, b) in self.stay.iter_mut().zip(&other.stay) {
            *a += b;
        }
        for (a, b) in self.advance.iter_mut().zip(&other.advance) {
            *a += b;
        }
        for j in 0..self.occupancy.len() {
            for k in 0..self.occupancy[j].len() {
                self.occupancy[j][k] += other.occupancy[j][k];
                for d in 0..self.sum_x[j][k].len() {
                    self.sum_x[j][k][d] += other.sum_x[j][k][d];
                    self.sum_xx[j][k][d] += other.sum_xx[j][k][d];
                }
            }
        }
    }
}

fn accumulate(model: &LtrHmm, prepared: &[PreparedMixture], seq: &FeatureSequence) -> Accumulator {
    let n = model.num_states();
    let len = seq.len();
    let emissions = emission_table(model, seq);
    let (stay, next) = log_transitions(model);
    let alpha = forward_pass(&emissions, &stay, &next);
    let beta = backward_pass(&emissions, &stay, &next);
    let ll = alpha[len * n - 1];
    let mut acc = Accumulator::new(model);
    acc.log_likelihood = ll;
    if !ll.is_finite() {
        return acc;
    }
    let mut comp = vec![0.0; model.num_mixtures()];
    for t in 0..len {
        let x = seq.frame(t);
        for j in 0..n {
            let gamma = (alpha[t * n + j] + beta[t * n + j] - ll).exp();
            if gamma == 0.0 {
                continue;
            }
            if t + 1 < len {
                let base = alpha[t * n + j] - ll;
                acc.stay[j] += (base + stay[j] + emissions.get(t + 1, j) + beta[(t + 1) * n + j]).exp();
                if j + 1 < n {
                    acc.advance[j] += (base
                        + next[j]
                        + emissions.get(t + 1, j + 1)
                        + beta[(t + 1) * n + j + 1])
                        .exp();
                }
            }
            let m = prepared[j].num_components();
            prepared[j].component_log_densities(x, &mut comp[..m]);
            let norm = emissions.get(t, j);
            for k in 0..m {
                let g = gamma * (comp[k] - norm).exp();
                if g == 0.0 {
                    continue;
                }
                acc.occupancy[j][k] += g;
                for (d, &xd) in x.iter().enumerate() {
                    acc.sum_x[j][k][d] += g * xd;
                    acc.sum_xx[j][k][d] += g * xd * xd;
                }
            }
        }
    }
    acc
}

fn expectation<S: Borrow<FeatureSequence> + Sync>(model: &LtrHmm, sequences: &[S]) -> Result<Accumulator> {
    let prepared: Vec<PreparedMixture> = model.states().iter().map(PreparedMixture::new).collect();
    let parts: Vec<Accumulator> = sequences
        .par_iter()
        .map(|s| accumulate(model, &prepared, s.borrow()))
        .collect();
    if let Some(i) = parts.iter().position(|p| !p.log_likelihood.is_finite()) {
        return Err(Error::NumericalUnderflow(format!(
            "training sequence {i} has zero likelihood under the model"
        )));
    }
    // Fixed-order reduction keeps results independent of thread scheduling.
    let mut total = Accumulator::new(model);
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

fn maximization(model: &LtrHmm, acc: &Accumulator) -> LtrHmm {
    let floor = model.variance_floor();
    let mut updated = model.clone();
    let n = model.num_states();
    let (transitions, states) = updated.parts_mut();
    for j in 0..n.saturating_sub(1) {
        let denom = acc.stay[j] + acc.advance[j];
        if denom > 0.0 {
            let stay = acc.stay[j] / denom;
            transitions[j][j] = stay;
            transitions[j][j + 1] = 1.0 - stay;
        }
    }
    for (j, state) in states.iter_mut().enumerate() {
        let total: f64 = acc.occupancy[j].iter().sum();
        if total <= 0.0 {
            continue;
        }
        for k in 0..state.num_components() {
            let occ = acc.occupancy[j][k];
            state.weights[k] = occ / total;
            if occ < 1e-10 {
                continue;
            }
            for d in 0..state.means[k].len() {
                let mean = acc.sum_x[j][k][d] / occ;
                let var = acc.sum_xx[j][k][d] / occ - mean * mean;
                state.means[k][d] = mean;
                state.variances[k][d] = var.max(floor);
            }
        }
        let sum: f64 = state.weights.iter().sum();
        state.weights.iter_mut().for_each(|w| *w /= sum);
    }
    updated
}

/// Total log-likelihood of a set of sequences.
pub fn total_log_likelihood<S: Borrow<FeatureSequence> + Sync>(model: &LtrHmm, sequences: &[S]) -> Result<f64> {
    let lls: Vec<f64> = sequences
        .par_iter()
        .map(|s| super::forward_log_likelihood(model, s.borrow()))
        .collect::<Result<_>>()?;
    Ok(lls.iter().sum())
}

/// Multi-sequence Baum-Welch re-estimation.
pub fn baum_welch<S: Borrow<FeatureSequence> + Sync>(
    model: &LtrHmm,
    sequences: &[S],
    config: &TrainingConfig,
) -> Result<(LtrHmm, TrainingReport)> {
    let dim = check_training_set(sequences, model.num_states())?;
    if dim != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            actual: dim,
        });
    }
    let mut current = model.clone();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    loop {
        let acc = expectation(&current, sequences)?;
        let ll = acc.log_likelihood;
        if let Some(&prev) = history.last() {
            let gain: f64 = (ll - prev) / f64::abs(prev).max(f64::MIN_POSITIVE);
            if gain < config.tol {
                converged = true;
                history.push(ll);
                break;
            }
        }
        history.push(ll);
        if iterations == config.max_iters {
            break;
        }
        current = maximization(&current, &acc);
        iterations += 1;
    }
    debug_assert!(current.validate().is_ok());
    Ok((
        current,
        TrainingReport {
            log_likelihood_per_iteration: history,
            iterations_run: iterations,
            converged,
        },
    ))
}
