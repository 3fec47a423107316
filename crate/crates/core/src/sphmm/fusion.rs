use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Utterance;
use crate::hmm::{forward_log_likelihood, AcousticModel};

use super::SuprasegmentalModel;

/// Weighting between the acoustic (`alpha = 0`) and prosodic (`alpha = 1`) scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    alpha: f64,
    /// Divide each log-likelihood by its own sequence length before weighting.
    pub length_normalize: bool,
}

impl FusionConfig {
    pub fn new(alpha: f64, length_normalize: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self {
            alpha,
            length_normalize,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.length_normalize)
    }
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            length_normalize: false,
        }
    }
}

/// The two log-likelihoods that enter a fused score, with their sequence lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreParts {
    pub acoustic: f64,
    pub acoustic_len: usize,
    pub prosodic: f64,
    pub prosodic_len: usize,
}

impl ScoreParts {
    /// `(1 - alpha) * acoustic + alpha * prosodic`. The end points return one term
    /// exactly, so an infinite score on the unused side cannot leak in.
    pub fn fuse(&self, cfg: &FusionConfig) -> f64 {
        let (a, p) = if cfg.length_normalize {
            (
                self.acoustic / self.acoustic_len as f64,
                self.prosodic / self.prosodic_len as f64,
            )
        } else {
            (self.acoustic, self.prosodic)
        };
        fuse_terms(a, p, cfg.alpha)
    }
}

fn fuse_terms(acoustic: f64, prosodic: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        acoustic
    } else if alpha == 1.0 {
        prosodic
    } else {
        (1.0 - alpha) * acoustic + alpha * prosodic
    }
}

/// Both log-likelihoods of one utterance under an (acoustic, prosodic) model pair.
pub fn score_parts(
    acoustic: &AcousticModel,
    supra: &SuprasegmentalModel,
    utterance: &Utterance,
) -> Result<ScoreParts> {
    let acoustic_ll = forward_log_likelihood(acoustic, &utterance.features)?;
    let obs = supra.observations(acoustic, utterance)?;
    let prosodic = forward_log_likelihood(&supra.hmm, &obs)?;
    Ok(ScoreParts {
        acoustic: acoustic_ll,
        acoustic_len: utterance.features.len(),
        prosodic,
        prosodic_len: obs.len(),
    })
}

/// Fused log score of an utterance. With `alpha = 0` the prosodic model is never consulted.
pub fn fused_score(
    acoustic: &AcousticModel,
    supra: &SuprasegmentalModel,
    utterance: &Utterance,
    cfg: &FusionConfig,
) -> Result<f64> {
    if cfg.alpha == 0.0 {
        let ll = forward_log_likelihood(acoustic, &utterance.features)?;
        return Ok(if cfg.length_normalize {
            ll / utterance.features.len() as f64
        } else {
            ll
        });
    }
    Ok(score_parts(acoustic, supra, utterance)?.fuse(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_range() {
        assert!(FusionConfig::new(-0.1, false).is_err());
        assert!(FusionConfig::new(1.1, false).is_err());
        assert!(FusionConfig::new(f64::NAN, false).is_err());
        assert_eq!(FusionConfig::default().alpha(), 0.5);
    }

    #[test]
    fn end_points_ignore_infinite_side() {
        assert_eq!(fuse_terms(-3.0, f64::NEG_INFINITY, 0.0), -3.0);
        assert_eq!(fuse_terms(f64::NEG_INFINITY, -2.0, 1.0), -2.0);
        assert_eq!(fuse_terms(-3.0, -1.0, 0.5), -2.0);
    }

    #[test]
    fn normalisation_divides_each_term() {
        let parts = ScoreParts {
            acoustic: -200.0,
            acoustic_len: 100,
            prosodic: -18.0,
            prosodic_len: 9,
        };
        assert_eq!(parts.fuse(&FusionConfig::new(0.5, true).unwrap()), -2.0);
        assert_eq!(parts.fuse(&FusionConfig::new(0.5, false).unwrap()), -109.0);
    }
}
