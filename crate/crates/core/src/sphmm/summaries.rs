use crate::error::{Error, Result};
use crate::features::{FeatureSequence, ProsodicTrack};

use super::SupraMapping;

/// Components: mean voiced F0 (Hz), F0 slope (Hz/frame), mean log energy, duration as a
/// fraction of the utterance, voicing ratio.
pub const SUPRA_DIM: usize = 5;

pub(crate) fn check_path(path: &[usize], num_states: usize) -> Result<()> {
    match path.first() {
        None => return Err(Error::EmptySequence),
        Some(&s) if s != 0 => {
            return Err(Error::IllegalPath(format!("path starts in state {s}")));
        }
        _ => {}
    }
    for (t, w) in path.windows(2).enumerate() {
        if w[1] != w[0] && w[1] != w[0] + 1 {
            return Err(Error::IllegalPath(format!(
                "step {} -> {} at frame {}",
                w[0],
                w[1],
                t + 1
            )));
        }
    }
    let last = *path.last().unwrap();
    if last >= num_states {
        return Err(Error::IllegalPath(format!(
            "state {last} outside a {num_states}-state mapping"
        )));
    }
    Ok(())
}

fn slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Summary vectors with the acoustic state each one covers.
pub(crate) fn summarize(
    path: &[usize],
    track: &ProsodicTrack,
    mapping: &SupraMapping,
) -> Result<(Vec<usize>, FeatureSequence)> {
    if path.len() != track.len() {
        return Err(Error::LengthMismatch {
            path: path.len(),
            track: track.len(),
        });
    }
    check_path(path, mapping.num_states())?;
    let total = path.len() as f64;
    let mut states = Vec::new();
    let mut out = FeatureSequence::empty(SUPRA_DIM);
    let mut start = 0;
    while start < path.len() {
        let state = path[start];
        let end = path[start..]
            .iter()
            .position(|&s| s != state)
            .map_or(path.len(), |p| start + p);
        let voiced: Vec<(f64, f64)> = (start..end)
            .filter(|&t| track.voiced[t])
            .map(|t| ((t - start) as f64, track.f0[t]))
            .collect();
        let f0_mean = if voiced.is_empty() {
            0.0
        } else {
            voiced.iter().map(|p| p.1).sum::<f64>() / voiced.len() as f64
        };
        let len = (end - start) as f64;
        let energy = track.log_energy[start..end].iter().sum::<f64>() / len;
        out.push(&[
            f0_mean,
            slope(&voiced),
            energy,
            len / total,
            voiced.len() as f64 / len,
        ]);
        states.push(state);
        start = end;
    }
    Ok((states, out))
}

/// Collapses each run of one acoustic state in `path` into a single prosodic summary
/// vector. Segments with no voiced frames get zero F0 mean and slope.
pub fn segment_summaries(
    path: &[usize],
    track: &ProsodicTrack,
    mapping: &SupraMapping,
) -> Result<FeatureSequence> {
    summarize(path, track, mapping).map(|(_, seq)| seq)
}
