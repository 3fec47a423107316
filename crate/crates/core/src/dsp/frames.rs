use crate::error::{Error, Result};
use crate::math::hamming;

use super::{AudioClip, FRAME_LEN, HOP};

/// Hamming-weighted analysis frames of one clip.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    pub frames: Vec<Vec<f64>>,
    pub frame_len: usize,
    pub hop: usize,
    pub sample_rate: u32,
}

impl FrameSequence {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Number of full windows of `frame_len` samples stepped by `hop`.
pub fn frame_count(num_samples: usize, frame_len: usize, hop: usize) -> usize {
    if num_samples < frame_len {
        0
    } else {
        (num_samples - frame_len) / hop + 1
    }
}

/// Cuts the clip into 30 ms Hamming windows every 5 ms. Trailing partial windows are dropped.
pub fn frame_signal(clip: &AudioClip) -> Result<FrameSequence> {
    frame_samples(clip.samples(), clip.sample_rate())
}

pub(crate) fn frame_samples(samples: &[i16], sample_rate: u32) -> Result<FrameSequence> {
    let n = frame_count(samples.len(), FRAME_LEN, HOP);
    if n == 0 {
        return Err(Error::TooShort {
            samples: samples.len(),
            required: FRAME_LEN,
        });
    }
    let window = hamming(FRAME_LEN);
    let frames = (0..n)
        .map(|i| {
            samples[i * HOP..i * HOP + FRAME_LEN]
                .iter()
                .zip(&window)
                .map(|(&s, &w)| f64::from(s) * w)
                .collect()
        })
        .collect();
    Ok(FrameSequence {
        frames,
        frame_len: FRAME_LEN,
        hop: HOP,
        sample_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_second_gives_195_frames() {
        let clip = AudioClip::new(vec![0; 16_000], 16_000).unwrap();
        assert_eq!(frame_signal(&clip).unwrap().len(), 195);
    }

    #[test]
    fn single_window() {
        let clip = AudioClip::new(vec![1; 480], 16_000).unwrap();
        let frames = frame_signal(&clip).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames.frames[0], hamming(480));
    }

    #[test]
    fn hamming_endpoints() {
        let w = hamming(480);
        assert!((w[0] - 0.08).abs() < 1e-15);
        assert!((w[479] - 0.08).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn frame_count_formula(len in 480usize..6000) {
            let clip = AudioClip::new(vec![7; len], 16_000).unwrap();
            let frames = frame_signal(&clip).unwrap();
            prop_assert_eq!(frames.len(), (len - 480) / 80 + 1);
            prop_assert!(frames.frames.iter().all(|f| f.len() == 480));
        }
    }
}
