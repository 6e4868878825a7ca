//! Empirical ball volumes of diagram samples, their product-space
//! (trajectory) analogue, a permutation two-sample test built on them, and
//! synthetic diagram generators.

mod demo;
mod generators;

pub use demo::{determinacy_demo, DemoRow, DeterminacyDemo};
pub use generators::DiagramGenerator;
pub use test::{two_sample_ball_test, TwoSampleTest};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::barcode::{pairwise_distances, DiagramMetric};
use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

/// Where a sample of diagrams came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Ph(usize),
    Zp(usize),
    Synthetic,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Ph(k) => write!(f, "PH_{k}"),
            Provenance::Zp(k) => write!(f, "ZP_{k}"),
            Provenance::Synthetic => f.write_str("synthetic"),
        }
    }
}

/// Nonempty list of diagrams sharing `(α, N)`, none of them overflowed.
#[derive(Debug, Clone, PartialEq)]
pub struct BarcodeSample {
    diagrams: Vec<PersistenceDiagram>,
    provenance: Provenance,
}

fn check_shared(diagrams: &[PersistenceDiagram]) -> Result<()> {
    let Some(first) = diagrams.first() else {
        return Err(Error::input("diagram sample must be nonempty"));
    };
    for (i, d) in diagrams.iter().enumerate() {
        if d.overflow() {
            return Err(Error::input(format!("diagram {i} overflowed its point cap")));
        }
        if d.alpha() != first.alpha() || d.cap() != first.cap() {
            return Err(Error::input(format!(
                "diagram {i} has (alpha, N) = ({}, {}), expected ({}, {})",
                d.alpha(),
                d.cap(),
                first.alpha(),
                first.cap()
            )));
        }
    }
    Ok(())
}

impl BarcodeSample {
    pub fn new(diagrams: Vec<PersistenceDiagram>, provenance: Provenance) -> Result<Self> {
        check_shared(&diagrams)?;
        Ok(BarcodeSample { diagrams, provenance })
    }

    pub fn diagrams(&self) -> &[PersistenceDiagram] {
        &self.diagrams
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.diagrams[0].alpha()
    }

    pub fn cap(&self) -> usize {
        self.diagrams[0].cap()
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius >= 0.0) {
        return Err(Error::input(format!("radius must be nonnegative, got {radius}")));
    }
    Ok(())
}

/// Fraction of the sample within closed distance `radius` of `center`.
pub fn empirical_ball_volume(sample: &BarcodeSample, center: &PersistenceDiagram, radius: f64, metric: &DiagramMetric) -> Result<f64> {
    check_radius(radius)?;
    let mut inside = 0usize;
    for d in sample.diagrams() {
        if metric.distance(center, d)? <= radius {
            inside += 1;
        }
    }
    Ok(inside as f64 / sample.len() as f64)
}

/// Empirical ball volumes around one center over an ascending radius grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallVolumeCurve {
    pub center: PersistenceDiagram,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub metric: String,
}

impl BallVolumeCurve {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.radii
            .iter()
            .zip(&self.values)
            .map(|(r, v)| vec![r.to_string(), v.to_string()])
            .collect()
    }
}

pub(crate) fn check_grid(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::input("radius grid must be nonempty"));
    }
    for &r in radii {
        check_radius(r)?;
    }
    if radii.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::input("radius grid must be ascending"));
    }
    Ok(())
}

pub fn ball_volume_curve(sample: &BarcodeSample, center: &PersistenceDiagram, radii: &[f64], metric: &DiagramMetric) -> Result<BallVolumeCurve> {
    check_grid(radii)?;
    let mut dists = sample
        .diagrams()
        .iter()
        .map(|d| metric.distance(center, d))
        .collect::<Result<Vec<f64>>>()?;
    dists.sort_by(f64::total_cmp);
    let n = dists.len() as f64;
    let values = radii
        .iter()
        .map(|&r| dists.partition_point(|&d| d <= r) as f64 / n)
        .collect();
    Ok(BallVolumeCurve {
        center: center.clone(),
        radii: radii.to_vec(),
        values,
        metric: metric.name().to_string(),
    })
}

/// Equal-length sequences of diagrams indexed by a finite time set.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    trajectories: Vec<Vec<PersistenceDiagram>>,
    times: Vec<usize>,
}

impl TrajectorySample {
    /// `times` labels the coordinates; it defaults to `0..J` when `None`.
    pub fn new(trajectories: Vec<Vec<PersistenceDiagram>>, times: Option<Vec<usize>>) -> Result<Self> {
        let Some(first) = trajectories.first() else {
            return Err(Error::input("trajectory sample must be nonempty"));
        };
        let j = first.len();
        if j == 0 {
            return Err(Error::input("trajectories must have at least one time point"));
        }
        if let Some(t) = trajectories.iter().position(|t| t.len() != j) {
            return Err(Error::input(format!("trajectory {t} has length {}, expected {j}", trajectories[t].len())));
        }
        check_shared(&trajectories.iter().flatten().cloned().collect::<Vec<_>>())?;
        let times = times.unwrap_or_else(|| (0..j).collect());
        if times.len() != j {
            return Err(Error::input(format!("{} time labels for trajectories of length {j}", times.len())));
        }
        Ok(TrajectorySample { trajectories, times })
    }

    pub fn trajectories(&self) -> &[Vec<PersistenceDiagram>] {
        &self.trajectories
    }

    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn horizon(&self) -> usize {
        self.times.len()
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }
}

/// Distance on trajectories: maximum over coordinates of the diagram metric.
pub fn trajectory_distance(a: &[PersistenceDiagram], b: &[PersistenceDiagram], metric: &DiagramMetric) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::input(format!("trajectory lengths differ: {} vs {}", a.len(), b.len())));
    }
    let mut best = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        best = best.max(metric.distance(x, y)?);
    }
    Ok(best)
}

/// Fraction of trajectories within max-coordinate distance `radius` of `center`.
pub fn fidi_ball_volume(ts: &TrajectorySample, center: &[PersistenceDiagram], radius: f64, metric: &DiagramMetric) -> Result<f64> {
    check_radius(radius)?;
    if center.len() != ts.horizon() {
        return Err(Error::input(format!("center has length {}, trajectories have length {}", center.len(), ts.horizon())));
    }
    let mut inside = 0usize;
    for t in ts.trajectories() {
        if trajectory_distance(center, t, metric)? <= radius {
            inside += 1;
        }
    }
    Ok(inside as f64 / ts.len() as f64)
}

/// Linear-interpolation (type 7) quantile of ascending data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Deciles 0.1, …, 0.9 of the off-diagonal entries of a distance matrix,
/// deduplicated. Falls back to `[0.0]` when there is at most one point.
pub fn default_radii(dist: &[Vec<f64>]) -> Vec<f64> {
    let mut values: Vec<f64> = dist
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row[i + 1..].iter().copied())
        .collect();
    if values.is_empty() {
        return vec![0.0];
    }
    values.sort_by(f64::total_cmp);
    let mut q: Vec<f64> = (1..=9).map(|k| quantile_sorted(&values, k as f64 / 10.0)).collect();
    q.dedup();
    q
}

/// Deciles of the pairwise distances of the pooled sample.
pub fn default_radii_for(samples: &[&BarcodeSample], metric: &DiagramMetric) -> Result<Vec<f64>> {
    let pooled: Vec<PersistenceDiagram> = samples.iter().flat_map(|s| s.diagrams().iter().cloned()).collect();
    Ok(default_radii(&pairwise_distances(&pooled, metric)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(pairs.to_vec(), 4.0, 3).unwrap()
    }

    fn sample() -> BarcodeSample {
        BarcodeSample::new(vec![diag(&[]), diag(&[(0.0, 2.0)]), diag(&[(0.0, 4.0)])], Provenance::Synthetic).unwrap()
    }

    #[test]
    fn ball_volumes() {
        let m = DiagramMetric::Bottleneck;
        let s = sample();
        let e = diag(&[]);
        assert_eq!(empirical_ball_volume(&s, &e, 1.0, &m).unwrap(), 2.0 / 3.0);
        assert_eq!(empirical_ball_volume(&s, &e, 2.0, &m).unwrap(), 1.0);
        assert_eq!(empirical_ball_volume(&s, &diag(&[(1.0, 1.5)]), 0.0, &m).unwrap(), 0.0);
        assert!(empirical_ball_volume(&s, &e, -1.0, &m).is_err());
        let c = ball_volume_curve(&s, &e, &[0.0, 0.5, 1.0, 2.0], &m).unwrap();
        assert_eq!(c.values, vec![1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert!(ball_volume_curve(&s, &e, &[1.0, 0.5], &m).is_err());
    }

    #[test]
    fn sample_validation() {
        assert!(BarcodeSample::new(vec![], Provenance::Synthetic).is_err());
        let other = PersistenceDiagram::new(vec![], 5.0, 3).unwrap();
        assert!(BarcodeSample::new(vec![diag(&[]), other], Provenance::Ph(1)).is_err());
        let over = PersistenceDiagram::capped(vec![(0.0, 1.0), (0.0, 2.0)], 4.0, 1).unwrap();
        assert!(BarcodeSample::new(vec![over], Provenance::Ph(1)).is_err());
        assert_eq!(Provenance::Zp(2).to_string(), "ZP_2");
    }

    #[test]
    fn fidi_volumes() {
        let m = DiagramMetric::Bottleneck;
        // Trajectory 1 is at coordinate distances (1, 3) from trajectory 2.
        let d8 = |pairs: &[(f64, f64)]| PersistenceDiagram::new(pairs.to_vec(), 8.0, 3).unwrap();
        let t1 = vec![d8(&[(0.0, 2.0)]), d8(&[(0.0, 6.0)])];
        let t2 = vec![d8(&[]), d8(&[])];
        assert_eq!(trajectory_distance(&t1, &t2, &m).unwrap(), 3.0);
        let ts = TrajectorySample::new(vec![t1, t2.clone()], None).unwrap();
        assert_eq!(fidi_ball_volume(&ts, &t2, 2.0, &m).unwrap(), 0.5);
        assert_eq!(fidi_ball_volume(&ts, &t2, 3.0, &m).unwrap(), 1.0);
        assert!(fidi_ball_volume(&ts, &t2[..1], 2.0, &m).is_err());
    }

    #[test]
    fn fidi_collapses_to_single_time() {
        let m = DiagramMetric::Bottleneck;
        let s = sample();
        let ts = TrajectorySample::new(s.diagrams().iter().map(|d| vec![d.clone()]).collect(), None).unwrap();
        for r in [0.0, 0.5, 1.0, 1.5, 2.0] {
            for c in s.diagrams() {
                assert_eq!(
                    fidi_ball_volume(&ts, std::slice::from_ref(c), r, &m).unwrap(),
                    empirical_ball_volume(&s, c, r, &m).unwrap()
                );
            }
        }
    }

    #[test]
    fn deciles() {
        let d = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 3.0], vec![2.0, 3.0, 0.0]];
        let r = default_radii(&d);
        assert_eq!(r.len(), 9);
        assert!((r[0] - 1.2).abs() < 1e-12 && (r[4] - 2.0).abs() < 1e-12 && (r[8] - 2.8).abs() < 1e-12);
    }
}
