//! Log-space forward, backward and Viterbi recursions for LTR models.

use crate::error::{Error, Result};
use crate::features::FeatureSequence;
use crate::math::{log_add, log_sum_exp};

use super::gmm::PreparedMixture;
use super::LtrHmm;

/// Emission log-densities laid out `[t * num_states + state]`.
pub(crate) struct EmissionTable {
    pub(crate) values: Vec<f64>,
    pub(crate) num_states: usize,
}

impl EmissionTable {
    pub(crate) fn get(&self, t: usize, j: usize) -> f64 {
        self.values[t * self.num_states + j]
    }
}

fn check_input(model: &LtrHmm, seq: &FeatureSequence) -> Result<()> {
    if seq.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            actual: seq.dim(),
        });
    }
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(())
}

pub(crate) fn emission_table(model: &LtrHmm, seq: &FeatureSequence) -> EmissionTable {
    let prepared: Vec<PreparedMixture> = model.states().iter().map(PreparedMixture::new).collect();
    let n = prepared.len();
    let mut values = Vec::with_capacity(seq.len() * n);
    let mut buf = vec![0.0; model.num_mixtures()];
    for x in seq.frames() {
        for p in &prepared {
            let k = p.num_components();
            p.component_log_densities(x, &mut buf[..k]);
            values.push(log_sum_exp(&buf[..k]));
        }
    }
    EmissionTable {
        values,
        num_states: n,
    }
}

/// Log self-loop and log advance probabilities per state.
pub(crate) fn log_transitions(model: &LtrHmm) -> (Vec<f64>, Vec<f64>) {
    let n = model.num_states();
    let a = model.transitions();
    let stay = (0..n).map(|i| a[i][i].ln()).collect();
    let next = (0..n)
        .map(|i| if i + 1 < n { a[i][i + 1].ln() } else { f64::NEG_INFINITY })
        .collect();
    (stay, next)
}

/// Forward and backward lattices for one sequence, `[t * num_states + state]`.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub num_states: usize,
    pub log_alpha: Vec<f64>,
    pub log_beta: Vec<f64>,
    pub log_likelihood: f64,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.log_alpha.len() / self.num_states
    }

    pub fn is_empty(&self) -> bool {
        self.log_alpha.is_empty()
    }

    pub fn alpha(&self, t: usize, j: usize) -> f64 {
        self.log_alpha[t * self.num_states + j]
    }

    pub fn beta(&self, t: usize, j: usize) -> f64 {
        self.log_beta[t * self.num_states + j]
    }

    /// State occupancy posterior, `P(q_t = j | O)`.
    pub fn gamma(&self, t: usize, j: usize) -> f64 {
        (self.alpha(t, j) + self.beta(t, j) - self.log_likelihood).exp()
    }
}

pub(crate) fn forward_pass(emissions: &EmissionTable, stay: &[f64], next: &[f64]) -> Vec<f64> {
    let n = emissions.num_states;
    let len = emissions.values.len() / n;
    let mut alpha = vec![f64::NEG_INFINITY; len * n];
    alpha[0] = emissions.get(0, 0);
    for t in 1..len {
        let (prev, cur) = alpha.split_at_mut(t * n);
        let prev = &prev[(t - 1) * n..];
        for j in 0..n {
            let mut acc = prev[j] + stay[j];
            if j > 0 {
                acc = log_add(acc, prev[j - 1] + next[j - 1]);
            }
            cur[j] = acc + emissions.get(t, j);
        }
    }
    alpha
}

pub(crate) fn backward_pass(emissions: &EmissionTable, stay: &[f64], next: &[f64]) -> Vec<f64> {
    let n = emissions.num_states;
    let len = emissions.values.len() / n;
    let mut beta = vec![f64::NEG_INFINITY; len * n];
    beta[(len - 1) * n + n - 1] = 0.0;
    for t in (0..len - 1).rev() {
        let (cur, after) = beta.split_at_mut((t + 1) * n);
        let cur = &mut cur[t * n..];
        for j in 0..n {
            let mut acc = stay[j] + emissions.get(t + 1, j) + after[j];
            if j + 1 < n {
                acc = log_add(acc, next[j] + emissions.get(t + 1, j + 1) + after[j + 1]);
            }
            cur[j] = acc;
        }
    }
    beta
}

/// `ln P(O | model)` over all LTR paths from the first to the last state.
///
/// Sequences shorter than the number of states have no legal path and score `-inf`.
pub fn forward_log_likelihood(model: &LtrHmm, seq: &FeatureSequence) -> Result<f64> {
    check_input(model, seq)?;
    let emissions = emission_table(model, seq);
    let (stay, next) = log_transitions(model);
    let alpha = forward_pass(&emissions, &stay, &next);
    Ok(alpha[alpha.len() - 1])
}

pub fn forward_backward(model: &LtrHmm, seq: &FeatureSequence) -> Result<Lattice> {
    check_input(model, seq)?;
    let emissions = emission_table(model, seq);
    let (stay, next) = log_transitions(model);
    let log_alpha = forward_pass(&emissions, &stay, &next);
    let log_beta = backward_pass(&emissions, &stay, &next);
    let log_likelihood = log_alpha[log_alpha.len() - 1];
    Ok(Lattice {
        num_states: model.num_states(),
        log_alpha,
        log_beta,
        log_likelihood,
    })
}

/// Most likely state path and its joint log probability.
pub fn viterbi(model: &LtrHmm, seq: &FeatureSequence) -> Result<(Vec<usize>, f64)> {
    check_input(model, seq)?;
    let n = model.num_states();
    let len = seq.len();
    if len < n {
        return Err(Error::NoLegalPath { len, states: n });
    }
    let emissions = emission_table(model, seq);
    let (stay, next) = log_transitions(model);
    let mut delta = vec![f64::NEG_INFINITY; n];
    let mut advanced = vec![false; len * n];
    delta[0] = emissions.get(0, 0);
    let mut prev = delta.clone();
    for t in 1..len {
        std::mem::swap(&mut prev, &mut delta);
        for j in 0..n {
            let from_self = prev[j] + stay[j];
            let from_prev = if j > 0 { prev[j - 1] + next[j - 1] } else { f64::NEG_INFINITY };
            // Ties resolve to the self-loop so the path is unique.
            if from_prev > from_self {
                delta[j] = from_prev + emissions.get(t, j);
                advanced[t * n + j] = true;
            } else {
                delta[j] = from_self + emissions.get(t, j);
            }
        }
    }
    let score = delta[n - 1];
    if score == f64::NEG_INFINITY || score.is_nan() {
        return Err(Error::NoLegalPath { len, states: n });
    }
    let mut path = vec![0; len];
    let mut state = n - 1;
    for t in (0..len).rev() {
        path[t] = state;
        if t > 0 && advanced[t * n + state] {
            state -= 1;
        }
    }
    Ok((path, score))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmm::GaussianMixture;

    fn two_state() -> LtrHmm {
        LtrHmm::new(
            LtrHmm::ltr_transitions(&[0.6, 1.0]),
            vec![
                GaussianMixture::single(vec![0.0], vec![1.0]),
                GaussianMixture::single(vec![3.0], vec![0.5]),
            ],
            1e-4,
        )
        .unwrap()
    }

    #[test]
    fn staircase_when_length_equals_states() {
        let model = two_state();
        let seq = FeatureSequence::new(1, vec![5.0, -5.0]).unwrap();
        let (path, _) = viterbi(&model, &seq).unwrap();
        assert_eq!(path, vec![0, 1]);
    }

    #[test]
    fn too_short_has_no_path() {
        let model = two_state();
        let seq = FeatureSequence::new(1, vec![0.0]).unwrap();
        assert!(matches!(viterbi(&model, &seq), Err(Error::NoLegalPath { .. })));
        assert_eq!(forward_log_likelihood(&model, &seq).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn input_errors() {
        let model = two_state();
        assert!(matches!(
            forward_log_likelihood(&model, &FeatureSequence::empty(1)),
            Err(Error::EmptySequence)
        ));
        let wide = FeatureSequence::new(2, vec![0.0; 4]).unwrap();
        assert!(matches!(
            viterbi(&model, &wide),
            Err(Error::DimensionMismatch { expected: 1, actual: 2 })
        ));
    }
}
