//! Autocorrelation pitch tracking and frame energy.
//!
//! The Hamming weighting is divided back out of each frame, then the lag maximising
//! the normalized cross-correlation between the frame and its shifted copy is taken as
//! the pitch period. The correlation is scale-free, so voicing decisions do not depend
//! on signal level.

use crate::features::ProsodicTrack;
use crate::math::hamming;

use super::FrameSequence;

#[derive(Debug, Clone, PartialEq)]
pub struct ProsodyConfig {
    pub min_f0: f64,
    pub max_f0: f64,
    pub voicing_threshold: f64,
    pub energy_floor: f64,
}

impl Default for ProsodyConfig {
    fn default() -> Self {
        Self {
            min_f0: 60.0,
            max_f0: 400.0,
            voicing_threshold: 0.45,
            energy_floor: 1e-10,
        }
    }
}

const OCTAVE_TOLERANCE: f64 = 0.9;

fn normalized_correlation(frame: &[f64], lag: usize) -> f64 {
    let n = frame.len() - lag;
    let (mut xy, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (x, y) = (frame[i], frame[i + lag]);
        xy += x * y;
        xx += x * x;
        yy += y * y;
    }
    if xx <= 0.0 || yy <= 0.0 {
        0.0
    } else {
        xy / (xx * yy).sqrt()
    }
}

/// Returns `(f0, peak correlation)`, or `None` when no local peak exists in the search range.
pub(crate) fn estimate_pitch(frame: &[f64], sample_rate: f64, cfg: &ProsodyConfig) -> Option<(f64, f64)> {
    let min_lag = (sample_rate / cfg.max_f0).ceil() as usize;
    let max_lag = ((sample_rate / cfg.min_f0).floor() as usize).min(frame.len().saturating_sub(2));
    if min_lag < 1 || max_lag <= min_lag {
        return None;
    }
    // One extra lag on each side so endpoints can be tested as local peaks.
    let r: Vec<f64> = (min_lag - 1..=max_lag + 1)
        .map(|lag| normalized_correlation(frame, lag))
        .collect();
    let peaks: Vec<usize> = (1..r.len() - 1)
        .filter(|&i| r[i] >= r[i - 1] && r[i] >= r[i + 1])
        .collect();
    let peak = peaks.iter().map(|&i| r[i]).fold(f64::NEG_INFINITY, f64::max);
    if peaks.is_empty() || peak <= 0.0 {
        return None;
    }
    // Multiples of the period correlate almost as well as the period itself; take the
    // shortest lag that is nearly as good as the best one.
    let i = *peaks.iter().find(|&&i| r[i] >= OCTAVE_TOLERANCE * peak)?;
    let (a, b, c) = (r[i - 1], r[i], r[i + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom < 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    let lag = (min_lag - 1 + i) as f64 + shift.clamp(-0.5, 0.5);
    let f0 = (sample_rate / lag).clamp(cfg.min_f0, cfg.max_f0);
    Some((f0, peak))
}

pub fn prosodic_track_with(frames: &FrameSequence, cfg: &ProsodyConfig) -> ProsodicTrack {
    let sr = f64::from(frames.sample_rate);
    let window = hamming(frames.frame_len);
    let mut raw = vec![0.0; frames.frame_len];
    let mut track = ProsodicTrack {
        f0: Vec::with_capacity(frames.len()),
        log_energy: Vec::with_capacity(frames.len()),
        voiced: Vec::with_capacity(frames.len()),
    };
    for frame in &frames.frames {
        let energy: f64 = frame.iter().map(|x| x * x).sum();
        track.log_energy.push((energy + cfg.energy_floor).ln());
        let pitch = if energy > 0.0 {
            for ((r, x), w) in raw.iter_mut().zip(frame).zip(&window) {
                *r = x / w;
            }
            estimate_pitch(&raw, sr, cfg).filter(|&(_, peak)| peak >= cfg.voicing_threshold)
        } else {
            None
        };
        match pitch {
            Some((f0, _)) => {
                track.f0.push(f0);
                track.voiced.push(true);
            }
            None => {
                track.f0.push(0.0);
                track.voiced.push(false);
            }
        }
    }
    track
}

/// Per-frame F0, log energy and voicing with the default configuration.
pub fn prosodic_track(frames: &FrameSequence) -> ProsodicTrack {
    prosodic_track_with(frames, &ProsodyConfig::default())
}
