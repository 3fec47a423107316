//! Corpus manifests, the sentence-based train/test protocol, feature normalization and
//! a synthetic corpus generator with known ground truth.

mod cache;
mod manifest;
mod normalize;
mod split;
mod synth;

pub use cache::{FeatureCache, CACHE_KIND};
pub use manifest::{
    load_manifest, parse_manifest, write_manifest, CorpusLabels, Gender, UtteranceRecord,
    MANIFEST_HEADER,
};
pub use normalize::{normalize_features, Normalizer};
pub use split::{split, SplitProtocol};
pub use synth::{synthesize_corpus, ProsodicProfile, SynthGenerator, SynthSpec, SyntheticCorpus};

/// The six emotions of the default corpus, in canonical order.
pub const DEFAULT_EMOTIONS: [&str; 6] = ["neutral", "angry", "sad", "happy", "disgust", "fear"];
