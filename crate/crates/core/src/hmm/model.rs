use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureSequence;

use super::GaussianMixture;

/// Left-to-right HMM with Gaussian-mixture emissions.
///
/// Every path starts in the first state and ends in the last. The only nonzero
/// transitions are self-loops and single steps to the next state; the last state is
/// absorbing. State indices are zero-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LtrHmm {
    transitions: Vec<Vec<f64>>,
    states: Vec<GaussianMixture>,
    variance_floor: f64,
}

/// The acoustic model: an LTR HMM over MFCC vectors.
pub type AcousticModel = LtrHmm;

impl LtrHmm {
    pub fn new(
        transitions: Vec<Vec<f64>>,
        states: Vec<GaussianMixture>,
        variance_floor: f64,
    ) -> Result<Self> {
        let model = Self {
            transitions,
            states,
            variance_floor,
        };
        model.validate()?;
        Ok(model)
    }

    /// Builds an LTR transition matrix from per-state self-loop probabilities.
    /// The last entry is ignored; the final state always loops with probability one.
    pub fn ltr_transitions(self_loops: &[f64]) -> Vec<Vec<f64>> {
        let n = self_loops.len();
        (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                if i + 1 == n {
                    row[i] = 1.0;
                } else {
                    row[i] = self_loops[i];
                    row[i + 1] = 1.0 - self_loops[i];
                }
                row
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.states.len();
        if n == 0 {
            return Err(Error::InvalidModel("model has no states".into()));
        }
        if self.transitions.len() != n || self.transitions.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidModel("transition matrix is not N x N".into()));
        }
        for (i, row) in self.transitions.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidModel(format!("row {i} sums to {sum}")));
            }
            for (j, &a) in row.iter().enumerate() {
                let allowed = j == i || j == i + 1;
                if !(0.0..=1.0).contains(&a) || (!allowed && a != 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "transition {i}->{j} = {a} violates left-to-right structure"
                    )));
                }
            }
        }
        let dim = self.states[0].dim();
        if dim == 0 {
            return Err(Error::InvalidModel("zero-dimensional emissions".into()));
        }
        for s in &self.states {
            s.validate(self.variance_floor)?;
            if s.dim() != dim {
                return Err(Error::InvalidModel("states disagree on dimension".into()));
            }
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn num_mixtures(&self) -> usize {
        self.states.iter().map(GaussianMixture::num_components).max().unwrap_or(0)
    }

    pub fn transitions(&self) -> &[Vec<f64>] {
        &self.transitions
    }

    pub fn states(&self) -> &[GaussianMixture] {
        &self.states
    }

    pub fn variance_floor(&self) -> f64 {
        self.variance_floor
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<Vec<f64>>, &mut Vec<GaussianMixture>) {
        (&mut self.transitions, &mut self.states)
    }

    /// Initial state distribution: all mass on the first state.
    pub fn initial(&self) -> Vec<f64> {
        let mut pi = vec![0.0; self.num_states()];
        pi[0] = 1.0;
        pi
    }

    /// Draws a state path of length `len` that ends in the last state (by rejection),
    /// then emits one vector per frame.
    pub fn sample<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Result<(Vec<usize>, FeatureSequence)> {
        let n = self.num_states();
        if len < n {
            return Err(Error::NoLegalPath { len, states: n });
        }
        let mut path = Vec::with_capacity(len);
        for _attempt in 0..10_000 {
            path.clear();
            let mut state = 0;
            path.push(state);
            for _ in 1..len {
                if state + 1 < n && rng.random::<f64>() >= self.transitions[state][state] {
                    state += 1;
                }
                path.push(state);
            }
            if state == n - 1 {
                let features = self.emit(&path, rng);
                return Ok((path, features));
            }
        }
        Err(Error::NumericalUnderflow(format!(
            "could not sample a {len}-frame path reaching the final state"
        )))
    }

    /// Emits one vector per frame of the given state path.
    pub fn emit<R: Rng + ?Sized>(&self, path: &[usize], rng: &mut R) -> FeatureSequence {
        let mut out = FeatureSequence::empty(self.dim());
        let mut row = vec![0.0; self.dim()];
        for &s in path {
            row.copy_from_slice(&sample_mixture(&self.states[s], rng));
            out.push(&row);
        }
        out
    }
}

pub(crate) fn sample_mixture<R: Rng + ?Sized>(g: &GaussianMixture, rng: &mut R) -> Vec<f64> {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut k = g.num_components() - 1;
    for (i, w) in g.weights.iter().enumerate() {
        acc += w;
        if u < acc {
            k = i;
            break;
        }
    }
    g.means[k]
        .iter()
        .zip(&g.variances[k])
        .map(|(m, v)| {
            let z: f64 = StandardNormal.sample(rng);
            m + v.sqrt() * z
        })
        .collect()
}

pub const MODEL_KIND: &str = "ltr-hmm";

impl LtrHmm {
    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        crate::persist::save(path, MODEL_KIND, self)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let model: Self = crate::persist::load(path, MODEL_KIND)?;
        model.validate()?;
        Ok(model)
    }
}
