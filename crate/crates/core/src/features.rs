use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Time-ordered sequence of fixed-dimension observation vectors, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSequence {
    dim: usize,
    data: Vec<f64>,
}

impl FeatureSequence {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, data: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn frame(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn frames(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn frames_mut(&mut self) -> impl Iterator<Item = &mut [f64]> + '_ {
        self.data.chunks_exact_mut(self.dim)
    }

    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.dim);
        self.data.extend_from_slice(row);
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Per-frame prosody: F0 in Hz (0 when unvoiced), log frame energy and voicing flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProsodicTrack {
    pub f0: Vec<f64>,
    pub log_energy: Vec<f64>,
    pub voiced: Vec<bool>,
}

impl ProsodicTrack {
    pub fn len(&self) -> usize {
        self.f0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f0.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.f0.len();
        if self.log_energy.len() != n || self.voiced.len() != n {
            return Err(Error::LengthMismatch {
                path: n,
                track: self.log_energy.len().min(self.voiced.len()),
            });
        }
        for (t, (&f, &v)) in self.f0.iter().zip(&self.voiced).enumerate() {
            let ok = if v {
                (60.0..=400.0).contains(&f)
            } else {
                f == 0.0
            };
            if !ok {
                return Err(Error::parse(
                    "prosodic track",
                    format!("frame {t}: f0 {f} inconsistent with voiced={v}"),
                ));
            }
        }
        Ok(())
    }
}

/// One utterance's acoustic and prosodic streams, always of equal length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub features: FeatureSequence,
    pub prosody: ProsodicTrack,
}

impl Utterance {
    pub fn new(features: FeatureSequence, prosody: ProsodicTrack) -> Result<Self> {
        if features.len() != prosody.len() {
            return Err(Error::LengthMismatch {
                path: features.len(),
                track: prosody.len(),
            });
        }
        Ok(Self { features, prosody })
    }
}
