use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, FiniteMetricMeasureSpace};
use crate::rng::substream;

/// `m` random `k×k` distance matrices drawn from one space.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrixSample {
    k: usize,
    draws: Vec<DistanceMatrix>,
}

impl DistanceMatrixSample {
    pub fn new(k: usize, draws: Vec<DistanceMatrix>) -> Result<Self> {
        if let Some(d) = draws.iter().find(|d| d.len() != k) {
            return Err(Error::input(format!("draw of order {} in a sample of order {k}", d.len())));
        }
        Ok(DistanceMatrixSample { k, draws })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn draws(&self) -> &[DistanceMatrix] {
        &self.draws
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Each draw as its sorted upper-triangle entries.
    pub fn features(&self) -> Vec<Vec<f64>> {
        self.draws
            .iter()
            .map(|d| {
                let mut v = d.upper_triangle();
                v.sort_by(f64::total_cmp);
                v
            })
            .collect()
    }
}

/// Draw `m` ordered `k`-tuples of points iid from the weights and record the
/// sub-distance-matrix of each. Points are chosen by inverse CDF from one
/// uniform per slot, so two spaces sampled with the same seed use the same
/// uniforms (common random numbers).
pub fn sample_distance_matrices(space: &FiniteMetricMeasureSpace, k: usize, m: usize, seed: u64) -> Result<DistanceMatrixSample> {
    if k < 2 {
        return Err(Error::input(format!("matrix order k must be at least 2, got {k}")));
    }
    if m < 1 {
        return Err(Error::input("need at least one draw"));
    }
    let mut cdf = Vec::with_capacity(space.len());
    let mut acc = 0.0;
    for &w in space.weights() {
        acc += w;
        cdf.push(acc);
    }
    let last_positive = space.weights().iter().rposition(|&w| w > 0.0).unwrap_or(0);
    let mut rng = substream(seed, 0);
    let mut draws = Vec::with_capacity(m);
    for _ in 0..m {
        let idx: Vec<usize> = (0..k)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * acc;
                cdf.partition_point(|&c| c <= u).min(last_positive)
            })
            .collect();
        draws.push(space.dist().submatrix(&idx));
    }
    DistanceMatrixSample::new(k, draws)
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Energy distance (V-statistic) between labelled groups of a pooled sample,
/// given the pooled pairwise distances.
fn energy_from_pooled(dist: &[Vec<f64>], labels: &[bool]) -> f64 {
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    let na = labels.iter().filter(|&&l| !l).count() as f64;
    let nb = labels.len() as f64 - na;
    for (i, row) in dist.iter().enumerate() {
        for (j, &d) in row.iter().enumerate().skip(i + 1) {
            match (labels[i], labels[j]) {
                (false, false) => aa += 2.0 * d,
                (true, true) => bb += 2.0 * d,
                _ => ab += d,
            }
        }
    }
    let within = aa / (na * na) + bb / (nb * nb);
    let e = 2.0 * ab / (na * nb) - within;
    // Identical empirical laws cancel exactly in real arithmetic; snap the
    // floating-point residue of that cancellation to zero.
    if e <= 1e-12 * within {
        0.0
    } else {
        e
    }
}

fn pooled(a: &DistanceMatrixSample, b: &DistanceMatrixSample) -> Result<(Vec<Vec<f64>>, Vec<bool>)> {
    if a.k() != b.k() {
        return Err(Error::input(format!("matrix orders differ: {} vs {}", a.k(), b.k())));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("samples must be nonempty"));
    }
    let mut feats = a.features();
    feats.extend(b.features());
    let n = feats.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclid(&feats[i], &feats[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let labels = (0..n).map(|i| i >= a.len()).collect();
    Ok((dist, labels))
}

/// Energy distance between the empirical laws of the sorted upper-triangle
/// vectors of two samples. Zero iff the empirical laws coincide.
pub fn dmd_discrepancy(a: &DistanceMatrixSample, b: &DistanceMatrixSample) -> Result<f64> {
    let (dist, labels) = pooled(a, b)?;
    Ok(energy_from_pooled(&dist, &labels))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DmdTest {
    pub statistic: f64,
    pub p_value: f64,
    pub n_perm: usize,
    pub seed: u64,
}

/// Permutation test of equal distance-matrix laws using [`dmd_discrepancy`].
pub fn dmd_permutation_test(a: &DistanceMatrixSample, b: &DistanceMatrixSample, n_perm: usize, seed: u64) -> Result<DmdTest> {
    if n_perm == 0 {
        return Err(Error::input("n_perm must be positive"));
    }
    let (dist, labels) = pooled(a, b)?;
    let observed = energy_from_pooled(&dist, &labels);
    let exceed = (0..n_perm)
        .into_par_iter()
        .filter(|&r| {
            let mut rng = substream(seed, r as u64);
            let mut perm = labels.clone();
            perm.shuffle(&mut rng);
            energy_from_pooled(&dist, &perm) >= observed - 1e-12
        })
        .count();
    Ok(DmdTest {
        statistic: observed,
        p_value: (1 + exceed) as f64 / (n_perm + 1) as f64,
        n_perm,
        seed,
    })
}
