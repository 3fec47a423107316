//! Weighted k-means over de-duplicated points.
//!
//! Points are sorted and collapsed into (point, multiplicity) pairs before seeding, so
//! the clustering depends only on the empirical distribution of the input: repeating
//! the whole data set, or reordering it, yields the same result for a given seed.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::GaussianMixture;

const MAX_LLOYD_ITERS: usize = 100;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn collapse<'a>(points: &[&'a [f64]]) -> Vec<(&'a [f64], f64)> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out: Vec<(&[f64], f64)> = Vec::new();
    for p in sorted {
        match out.last_mut() {
            Some((q, count)) if q.iter().zip(p).all(|(a, b)| a.to_bits() == b.to_bits()) => {
                *count += 1.0
            }
            _ => out.push((p, 1.0)),
        }
    }
    out
}

/// Clusters `points` into at most `k` groups; returns per-cluster `(mass, members)` with
/// members as indices into the collapsed point list, alongside that list.
fn cluster<'a, R: Rng + ?Sized>(
    points: &[&'a [f64]],
    k: usize,
    rng: &mut R,
) -> (Vec<(&'a [f64], f64)>, Vec<usize>, usize) {
    let uniq = collapse(points);
    let mults: Vec<f64> = uniq.iter().map(|(_, m)| *m).collect();

    // k-means++ seeding, weighted by multiplicity.
    let mut centres: Vec<Vec<f64>> = Vec::with_capacity(k);
    let first = WeightedIndex::new(&mults).expect("non-empty point set").sample(rng);
    centres.push(uniq[first].0.to_vec());
    let mut nearest: Vec<f64> = uniq.iter().map(|(p, _)| sq_dist(p, &centres[0])).collect();
    while centres.len() < k {
        let weights: Vec<f64> = nearest.iter().zip(&mults).map(|(d, m)| d * m).collect();
        let Ok(sampler) = WeightedIndex::new(&weights) else {
            break; // every distinct point is already a centre
        };
        let idx = sampler.sample(rng);
        let c = uniq[idx].0.to_vec();
        for (n, (p, _)) in nearest.iter_mut().zip(&uniq) {
            *n = n.min(sq_dist(p, &c));
        }
        centres.push(c);
    }

    let dim = uniq[0].0.len();
    let mut assign = vec![usize::MAX; uniq.len()];
    for _ in 0..MAX_LLOYD_ITERS {
        let mut changed = false;
        for (a, (p, _)) in assign.iter_mut().zip(&uniq) {
            let mut best = (0, f64::INFINITY);
            for (c, centre) in centres.iter().enumerate() {
                let d = sq_dist(p, centre);
                if d < best.1 {
                    best = (c, d);
                }
            }
            if *a != best.0 {
                *a = best.0;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; centres.len()];
        let mut mass = vec![0.0; centres.len()];
        for (&a, (p, m)) in assign.iter().zip(&uniq) {
            mass[a] += m;
            for (s, x) in sums[a].iter_mut().zip(p.iter()) {
                *s += m * x;
            }
        }
        for ((centre, sum), m) in centres.iter_mut().zip(sums).zip(&mass) {
            if *m > 0.0 {
                *centre = sum.into_iter().map(|s| s / m).collect();
            }
        }
    }
    let num_centres = centres.len();
    (uniq, assign, num_centres)
}

fn weighted_moments<'p>(
    members: impl Iterator<Item = (&'p [f64], f64)>,
    dim: usize,
    variance_floor: f64,
) -> (f64, Vec<f64>, Vec<f64>) {
    let members: Vec<_> = members.collect();
    let mass: f64 = members.iter().map(|(_, m)| m).sum();
    let mut mean = vec![0.0; dim];
    for (p, m) in &members {
        for (s, x) in mean.iter_mut().zip(p.iter()) {
            *s += m * x;
        }
    }
    mean.iter_mut().for_each(|s| *s /= mass);
    let mut var = vec![0.0; dim];
    for (p, m) in &members {
        for ((v, x), mu) in var.iter_mut().zip(p.iter()).zip(&mean) {
            *v += m * (x - mu) * (x - mu);
        }
    }
    var.iter_mut()
        .for_each(|v| *v = (*v / mass).max(variance_floor));
    (mass, mean, var)
}

/// Fits an `m`-component mixture to `points` by k-means: component weights are cluster
/// masses, means and diagonal variances are cluster moments. When there are fewer
/// distinct points than `m`, the surplus components copy the pooled moments with zero
/// weight.
pub(crate) fn mixture_from_kmeans<R: Rng + ?Sized>(
    points: &[&[f64]],
    m: usize,
    variance_floor: f64,
    rng: &mut R,
) -> GaussianMixture {
    let dim = points[0].len();
    let (uniq, assign, num_centres) = cluster(points, m, rng);
    let total: f64 = uniq.iter().map(|(_, w)| w).sum();
    let (_, pooled_mean, pooled_var) =
        weighted_moments(uniq.iter().copied(), dim, variance_floor);

    let mut mixture = GaussianMixture {
        weights: Vec::with_capacity(m),
        means: Vec::with_capacity(m),
        variances: Vec::with_capacity(m),
    };
    for c in 0..m {
        let members = uniq
            .iter()
            .zip(&assign)
            .filter(|(_, &a)| a == c)
            .map(|(p, _)| *p);
        let (mass, mean, var) = if c < num_centres {
            weighted_moments(members, dim, variance_floor)
        } else {
            (0.0, Vec::new(), Vec::new())
        };
        if mass > 0.0 {
            mixture.weights.push(mass / total);
            mixture.means.push(mean);
            mixture.variances.push(var);
        } else {
            mixture.weights.push(0.0);
            mixture.means.push(pooled_mean.clone());
            mixture.variances.push(pooled_var.clone());
        }
    }
    // Guard the sum-to-one invariant against accumulated rounding.
    let sum: f64 = mixture.weights.iter().sum();
    mixture.weights.iter_mut().for_each(|w| *w /= sum);
    mixture
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separates_two_blobs() {
        let pts: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![if i < 20 { 0.0 } else { 10.0 } + (i % 5) as f64 * 0.1])
            .collect();
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        let g = mixture_from_kmeans(&refs, 2, 1e-4, &mut ChaCha8Rng::seed_from_u64(1));
        let mut means: Vec<f64> = g.means.iter().map(|m| m[0]).collect();
        means.sort_by(f64::total_cmp);
        assert!((means[0] - 0.2).abs() < 1e-9 && (means[1] - 10.2).abs() < 1e-9);
        assert_eq!(g.weights, vec![0.5, 0.5]);
    }

    #[test]
    fn fewer_points_than_components() {
        let pts = [[1.0], [1.0], [2.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let g = mixture_from_kmeans(&refs, 4, 1e-4, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(g.num_components(), 4);
        assert_eq!(g.weights.iter().filter(|&&w| w > 0.0).count(), 2);
        g.validate(1e-4).unwrap();
    }

    #[test]
    fn duplication_and_order_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<Vec<f64>> = (0..60).map(|_| vec![rng.random(), rng.random()]).collect();
        let once: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        let mut twice = once.clone();
        twice.extend(once.iter().rev());
        let a = mixture_from_kmeans(&once, 4, 1e-4, &mut ChaCha8Rng::seed_from_u64(5));
        let b = mixture_from_kmeans(&twice, 4, 1e-4, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }
}
