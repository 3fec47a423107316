use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::features::FeatureSequence;

use super::{FrameSequence, MFCC_DIM};

#[derive(Debug, Clone, PartialEq)]
pub struct MfccConfig {
    pub pre_emphasis: f64,
    pub fft_size: usize,
    pub num_filters: usize,
    pub low_hz: f64,
    pub high_hz: f64,
    pub sample_rate: f64,
    /// Lower bound on filterbank energies before the log.
    pub energy_floor: f64,
    /// Coefficients c1..=c_num_coeffs are kept; c0 is dropped.
    pub num_coeffs: usize,
}

impl Default for MfccConfig {
    fn default() -> Self {
        Self {
            pre_emphasis: 0.97,
            fft_size: 512,
            num_filters: 26,
            low_hz: 0.0,
            high_hz: 8000.0,
            sample_rate: 16_000.0,
            energy_floor: 1e-10,
            num_coeffs: MFCC_DIM,
        }
    }
}

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Precomputed filterbank, DCT basis and FFT plan.
pub struct MfccExtractor {
    config: MfccConfig,
    fft: Arc<dyn Fft<f64>>,
    /// `(first_bin, weights)` per filter.
    filters: Vec<(usize, Vec<f64>)>,
    /// Rows c1..=c_num_coeffs of the orthonormal DCT-II.
    dct: Vec<Vec<f64>>,
}

impl MfccExtractor {
    pub fn new(config: MfccConfig) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(config.fft_size);
        let filters = triangular_filters(&config);
        let n = config.num_filters as f64;
        let dct = (1..=config.num_coeffs)
            .map(|k| {
                (0..config.num_filters)
                    .map(|m| (2.0 / n).sqrt() * (PI * k as f64 * (m as f64 + 0.5) / n).cos())
                    .collect()
            })
            .collect();
        Self {
            config,
            fft,
            filters,
            dct,
        }
    }

    pub fn config(&self) -> &MfccConfig {
        &self.config
    }

    pub fn frame(&self, frame: &[f64]) -> Vec<f64> {
        let cfg = &self.config;
        let mut buf = vec![Complex::new(0.0, 0.0); cfg.fft_size];
        let mut prev = 0.0;
        for (slot, &x) in buf.iter_mut().zip(frame) {
            *slot = Complex::new(x - cfg.pre_emphasis * prev, 0.0);
            prev = x;
        }
        self.fft.process(&mut buf);
        let log_mel: Vec<f64> = self
            .filters
            .iter()
            .map(|(start, weights)| {
                let e: f64 = weights
                    .iter()
                    .zip(&buf[*start..])
                    .map(|(w, c)| w * c.norm())
                    .sum();
                e.max(cfg.energy_floor).ln()
            })
            .collect();
        self.dct
            .iter()
            .map(|row| row.iter().zip(&log_mel).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn extract(&self, frames: &FrameSequence) -> FeatureSequence {
        let mut out = FeatureSequence::empty(self.config.num_coeffs);
        for f in &frames.frames {
            out.push(&self.frame(f));
        }
        out
    }
}

impl Default for MfccExtractor {
    fn default() -> Self {
        Self::new(MfccConfig::default())
    }
}

/// Triangular filters equally spaced on the mel scale, evaluated at FFT bin centre frequencies.
fn triangular_filters(cfg: &MfccConfig) -> Vec<(usize, Vec<f64>)> {
    let lo = hz_to_mel(cfg.low_hz);
    let hi = hz_to_mel(cfg.high_hz);
    let edges: Vec<f64> = (0..cfg.num_filters + 2)
        .map(|i| mel_to_hz(lo + (hi - lo) * i as f64 / (cfg.num_filters + 1) as f64))
        .collect();
    let bin_hz = cfg.sample_rate / cfg.fft_size as f64;
    let num_bins = cfg.fft_size / 2 + 1;
    (0..cfg.num_filters)
        .map(|m| {
            let (left, centre, right) = (edges[m], edges[m + 1], edges[m + 2]);
            let weight = |k: usize| {
                let f = k as f64 * bin_hz;
                if f <= left || f >= right {
                    0.0
                } else if f <= centre {
                    (f - left) / (centre - left)
                } else {
                    (right - f) / (right - centre)
                }
            };
            let start = (0..num_bins).find(|&k| weight(k) > 0.0).unwrap_or(0);
            let end = (start..num_bins)
                .rev()
                .find(|&k| weight(k) > 0.0)
                .map_or(start, |k| k + 1);
            (start, (start..end).map(weight).collect())
        })
        .collect()
}

/// MFCCs c1..c16 per frame with the default configuration.
pub fn mfcc(frames: &FrameSequence) -> FeatureSequence {
    MfccExtractor::default().extract(frames)
}
