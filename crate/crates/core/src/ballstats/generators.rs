use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BarcodeSample, Provenance};
use crate::error::{Error, Result};
use crate::metric::PointCloud;
use crate::persistence::{ph_pipeline, PersistenceDiagram, PhParams};
use crate::rng::substream;

/// Synthetic diagram distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagramGenerator {
    /// Between 1 and `max_points` pairs, each with birth and death drawn
    /// uniformly from `[0, α]` and ordered.
    UniformBox {
        alpha: f64,
        #[serde(rename = "N")]
        cap: usize,
        max_points: usize,
    },
    /// Always the same diagram.
    PointMass {
        alpha: f64,
        #[serde(rename = "N")]
        cap: usize,
        pairs: Vec<(f64, f64)>,
    },
    /// PH of `points` evenly spaced points on a unit circle, rotated by a
    /// uniform random phase, with Gaussian noise of standard deviation
    /// `noise` on each coordinate.
    Circle { points: usize, noise: f64, ph: PhParams },
    /// As `Circle`, but with the points split evenly between two unit
    /// circles whose centers are `separation` apart.
    TwoCircles {
        points: usize,
        noise: f64,
        separation: f64,
        ph: PhParams,
    },
}

fn noisy_circles(rng: &mut ChaCha8Rng, points: usize, noise: f64, centers: &[f64]) -> Result<PointCloud> {
    let normal = Normal::new(0.0, noise).map_err(|e| Error::input(format!("noise: {e}")))?;
    let per = points / centers.len();
    let mut pts = Vec::with_capacity(points);
    for (c, &cx) in centers.iter().enumerate() {
        let count = if c + 1 == centers.len() { points - per * c } else { per };
        let phase = rng.random::<f64>() * TAU;
        for i in 0..count {
            let theta = phase + TAU * i as f64 / count as f64;
            pts.push(vec![cx + theta.cos() + normal.sample(rng), theta.sin() + normal.sample(rng)]);
        }
    }
    PointCloud::new(pts, None)
}

impl DiagramGenerator {
    pub fn alpha(&self) -> f64 {
        match self {
            DiagramGenerator::UniformBox { alpha, .. } | DiagramGenerator::PointMass { alpha, .. } => *alpha,
            DiagramGenerator::Circle { ph, .. } | DiagramGenerator::TwoCircles { ph, .. } => ph.alpha,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            DiagramGenerator::Circle { ph, .. } | DiagramGenerator::TwoCircles { ph, .. } => Provenance::Ph(ph.k),
            _ => Provenance::Synthetic,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DiagramGenerator::UniformBox { alpha, cap, max_points } => {
                if *max_points == 0 || max_points > cap {
                    return Err(Error::input(format!("max_points must be in 1..=N, got {max_points}")));
                }
                PersistenceDiagram::empty(*alpha, *cap).map(|_| ())
            }
            DiagramGenerator::PointMass { alpha, cap, pairs } => PersistenceDiagram::new(pairs.clone(), *alpha, *cap).map(|_| ()),
            DiagramGenerator::Circle { points, noise, ph } | DiagramGenerator::TwoCircles { points, noise, ph, .. } => {
                if *points < 2 {
                    return Err(Error::input("circle generators need at least 2 points"));
                }
                if !(*noise >= 0.0) || !noise.is_finite() {
                    return Err(Error::input(format!("noise must be finite and nonnegative, got {noise}")));
                }
                PersistenceDiagram::empty(ph.alpha, ph.cap).map(|_| ())
            }
        }
    }

    pub fn sample_one(&self, rng: &mut ChaCha8Rng) -> Result<PersistenceDiagram> {
        match self {
            DiagramGenerator::UniformBox { alpha, cap, max_points } => {
                let count = rng.random_range(1..=*max_points);
                let mut pairs = Vec::with_capacity(count);
                while pairs.len() < count {
                    let (u, v) = (rng.random::<f64>() * alpha, rng.random::<f64>() * alpha);
                    if u != v {
                        pairs.push((u.min(v), u.max(v)));
                    }
                }
                PersistenceDiagram::new(pairs, *alpha, *cap)
            }
            DiagramGenerator::PointMass { alpha, cap, pairs } => PersistenceDiagram::new(pairs.clone(), *alpha, *cap),
            DiagramGenerator::Circle { points, noise, ph } => ph_pipeline(&noisy_circles(rng, *points, *noise, &[0.0])?, ph),
            DiagramGenerator::TwoCircles { points, noise, separation, ph } => {
                ph_pipeline(&noisy_circles(rng, *points, *noise, &[0.0, *separation])?, ph)
            }
        }
    }

    /// `n` independent diagrams; diagram `i` uses substream `i` of `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<BarcodeSample> {
        self.validate()?;
        let diagrams = (0..n)
            .into_par_iter()
            .map(|i| self.sample_one(&mut substream(seed, i as u64)))
            .collect::<Result<Vec<_>>>()?;
        BarcodeSample::new(diagrams, self.provenance())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_box_respects_bounds() {
        let g = DiagramGenerator::UniformBox { alpha: 2.0, cap: 4, max_points: 4 };
        let s = g.sample(50, 3).unwrap();
        assert_eq!(s.len(), 50);
        for d in s.diagrams() {
            assert!((1..=4).contains(&d.len()));
        }
        assert_eq!(s, g.sample(50, 3).unwrap());
    }

    #[test]
    fn circles_have_expected_loops() {
        let ph = PhParams { k: 1, max_scale: 2.0, max_dim: 2, alpha: 2.0, cap: 16 };
        let one = DiagramGenerator::Circle { points: 20, noise: 0.05, ph };
        let two = DiagramGenerator::TwoCircles { points: 20, noise: 0.05, separation: 3.0, ph };
        let long = |d: &PersistenceDiagram| d.persistences().iter().filter(|&&p| p > 0.5).count();
        let a = one.sample(10, 1).unwrap();
        let b = two.sample(10, 1).unwrap();
        assert_eq!(a.provenance(), Provenance::Ph(1));
        assert!(a.diagrams().iter().all(|d| long(d) == 1), "{:?}", a.diagrams());
        assert!(b.diagrams().iter().filter(|d| long(d) == 2).count() >= 9, "{:?}", b.diagrams());
    }

    #[test]
    fn validation() {
        assert!(DiagramGenerator::UniformBox { alpha: 1.0, cap: 2, max_points: 3 }.validate().is_err());
        assert!(DiagramGenerator::PointMass { alpha: 1.0, cap: 2, pairs: vec![(0.5, 2.0)] }.validate().is_err());
    }
}
