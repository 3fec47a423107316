use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{mean, sample_sd};

/// One-sided critical value at the 0.05 level, reported for comparison only.
pub const T_CRITICAL_005: f64 = 1.645;

/// `t = (mean_2 - mean_1) / sd_pooled` with `sd_pooled = sqrt((sd_1^2 + sd_2^2) / n_pool)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub mean_1: f64,
    pub mean_2: f64,
    pub sd_1: f64,
    pub sd_2: f64,
    pub n_pool: usize,
    pub sd_pooled: f64,
    /// Zero when both the mean difference and the pooled deviation are zero.
    pub t: f64,
}

impl TTestResult {
    pub fn from_summaries(mean_1: f64, sd_1: f64, mean_2: f64, sd_2: f64, n_pool: usize) -> Result<Self> {
        if n_pool == 0 {
            return Err(Error::InvalidN(n_pool));
        }
        let sd_pooled = ((sd_1 * sd_1 + sd_2 * sd_2) / n_pool as f64).sqrt();
        let diff = mean_2 - mean_1;
        let t = if diff == 0.0 { 0.0 } else { diff / sd_pooled };
        Ok(Self {
            mean_1,
            mean_2,
            sd_1,
            sd_2,
            n_pool,
            sd_pooled,
            t,
        })
    }

    /// The same test recomputed from means and deviations first rounded to `decimals`
    /// places, as when working from published summary figures.
    pub fn from_rounded_summaries(&self, decimals: u32) -> Self {
        let r = |x| round_to(x, decimals);
        Self::from_summaries(r(self.mean_1), r(self.sd_1), r(self.mean_2), r(self.sd_2), self.n_pool)
            .expect("n_pool already validated")
    }

    pub fn exceeds_critical(&self) -> bool {
        self.t.abs() > T_CRITICAL_005
    }
}

/// Student t with the pooled deviation, using the supplied `n_pool` rather than the
/// sample sizes. Sample deviations use the n - 1 denominator.
pub fn pooled_t(sample_1: &[f64], sample_2: &[f64], n_pool: usize) -> Result<TTestResult> {
    if sample_1.is_empty() || sample_2.is_empty() {
        return Err(Error::EmptyResults);
    }
    TTestResult::from_summaries(mean(sample_1), sample_sd(sample_1), mean(sample_2), sample_sd(sample_2), n_pool)
}

/// Round half away from zero to `decimals` places.
pub fn round_to(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale).round() / scale
}
