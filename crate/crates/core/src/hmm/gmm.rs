use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{log_sum_exp, LN_2PI};

/// Diagonal-covariance Gaussian mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixture {
    pub weights: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

impl GaussianMixture {
    pub fn single(mean: Vec<f64>, variance: Vec<f64>) -> Self {
        Self {
            weights: vec![1.0],
            means: vec![mean],
            variances: vec![variance],
        }
    }

    pub fn num_components(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.means.first().map_or(0, Vec::len)
    }

    pub fn validate(&self, variance_floor: f64) -> Result<()> {
        let m = self.weights.len();
        if m == 0 || self.means.len() != m || self.variances.len() != m {
            return Err(Error::InvalidModel("mixture component counts disagree".into()));
        }
        let dim = self.dim();
        if self
            .means
            .iter()
            .chain(&self.variances)
            .any(|v| v.len() != dim)
        {
            return Err(Error::InvalidModel("mixture dimensions disagree".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 || self.weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(Error::InvalidModel(format!("mixture weights sum to {total}")));
        }
        if self
            .variances
            .iter()
            .flatten()
            .any(|&v| !(v >= variance_floor) || !v.is_finite())
        {
            return Err(Error::InvalidModel(format!(
                "variance below floor {variance_floor}"
            )));
        }
        Ok(())
    }

    /// Mixture-weighted mean vector.
    pub fn mean(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (w, mu) in self.weights.iter().zip(&self.means) {
            for (o, m) in out.iter_mut().zip(mu) {
                *o += w * m;
            }
        }
        out
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        PreparedMixture::new(self).log_density(x)
    }
}

/// Per-component constants hoisted out of the inner scoring loop.
pub(crate) struct PreparedMixture<'a> {
    mixture: &'a GaussianMixture,
    /// `ln w_k - 0.5 * sum_d ln(2 pi var_kd)`
    offsets: Vec<f64>,
    inv_vars: Vec<Vec<f64>>,
}

impl<'a> PreparedMixture<'a> {
    pub(crate) fn new(mixture: &'a GaussianMixture) -> Self {
        let offsets = mixture
            .weights
            .iter()
            .zip(&mixture.variances)
            .map(|(w, var)| {
                w.ln() - 0.5 * var.iter().map(|v| LN_2PI + v.ln()).sum::<f64>()
            })
            .collect();
        let inv_vars = mixture
            .variances
            .iter()
            .map(|var| var.iter().map(|v| 1.0 / v).collect())
            .collect();
        Self {
            mixture,
            offsets,
            inv_vars,
        }
    }

    pub(crate) fn num_components(&self) -> usize {
        self.offsets.len()
    }

    /// Writes `ln(w_k N(x; mu_k, var_k))` for each component into `out`.
    pub(crate) fn component_log_densities(&self, x: &[f64], out: &mut [f64]) {
        for (k, slot) in out.iter_mut().enumerate() {
            let mut q = 0.0;
            for ((xi, mi), iv) in x.iter().zip(&self.mixture.means[k]).zip(&self.inv_vars[k]) {
                let d = xi - mi;
                q += d * d * iv;
            }
            *slot = self.offsets[k] - 0.5 * q;
        }
    }

    pub(crate) fn log_density(&self, x: &[f64]) -> f64 {
        let mut buf = vec![0.0; self.offsets.len()];
        self.component_log_densities(x, &mut buf);
        log_sum_exp(&buf)
    }
}
