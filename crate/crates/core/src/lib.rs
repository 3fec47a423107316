//! Speaker identification in emotional speech.
//!
//! A two-stage recognizer first identifies the emotion of an utterance with
//! suprasegmental HMMs (acoustic MFCC models fused with prosodic models), then
//! identifies the speaker among emotion-specific HMM speaker models.

pub mod corpus;
pub mod dsp;
pub mod eval;
pub mod error;
pub mod features;
pub mod hmm;
pub mod math;
pub mod persist;
pub mod recognizer;
pub mod sphmm;

pub use error::{Error, ErrorClass, Result};
pub use features::{FeatureSequence, ProsodicTrack, Utterance};
