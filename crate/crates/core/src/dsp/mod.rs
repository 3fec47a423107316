//! Audio front end: WAV ingestion, framing, MFCC and prosody extraction.

mod audio;
mod frames;
mod mfcc;
mod prosody;

pub use audio::{load_audio, write_wav, AudioClip, SAMPLE_RATE};
pub use frames::{frame_count, frame_signal, FrameSequence};
pub use mfcc::{mfcc, MfccConfig, MfccExtractor};
pub use prosody::{prosodic_track, ProsodyConfig};

use crate::error::Result;
use crate::features::Utterance;

/// 30 ms at 16 kHz.
pub const FRAME_LEN: usize = 480;
/// 5 ms at 16 kHz.
pub const HOP: usize = 80;
pub const MFCC_DIM: usize = 16;

/// Full front end for one clip: MFCC and prosodic streams of equal length.
pub fn extract(clip: &AudioClip) -> Result<Utterance> {
    let frames = frame_signal(clip)?;
    let features = mfcc(&frames);
    let prosody = prosodic_track(&frames);
    Utterance::new(features, prosody)
}
