use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{dmd_discrepancy, sample_distance_matrices, RadiusFamily};
use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, FiniteMetricMeasureSpace};
use crate::rng::substream;

/// Radii closer than this to a distance from the center count as boundary ties.
pub const TIE_TOL: f64 = 1e-9;

/// A sequence of approximating spaces, a limit space, and a map sending each
/// approximant point to a designated limit point.
#[derive(Debug, Clone)]
pub struct Design {
    pub approximants: Vec<FiniteMetricMeasureSpace>,
    pub limit: FiniteMetricMeasureSpace,
    pub centers: Vec<Vec<usize>>,
    pub radii: RadiusFamily,
}

fn midpoint_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
}

fn nearest(xs: &[f64], y: f64) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if (x - y).abs() < (xs[best] - y).abs() {
            best = i;
        }
    }
    best
}

/// Uniform midpoint grids `{(i + ½)/n}` on [0, 1] for each size, refining
/// toward a grid of `limit_size` points. Each approximant point is mapped to
/// its nearest limit point and ball volumes are compared at radii 0.24 and
/// 0.26, which avoid every grid distance for the default sizes.
pub fn uniform_grid_design(sizes: &[usize], limit_size: usize) -> Result<Design> {
    if limit_size == 0 || sizes.iter().any(|&n| n == 0) {
        return Err(Error::input("grid sizes must be positive"));
    }
    let limit_pts = midpoint_grid(limit_size);
    let limit = FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_line(&limit_pts)?);
    let mut approximants = Vec::new();
    let mut centers = Vec::new();
    for &n in sizes {
        let pts = midpoint_grid(n);
        centers.push(pts.iter().map(|&x| nearest(&limit_pts, x)).collect());
        approximants.push(FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_line(&pts)?));
    }
    Ok(Design {
        approximants,
        limit,
        centers,
        radii: RadiusFamily::new(vec![0.24, 0.26])?,
    })
}

/// The `limit_size`-point midpoint grid with each point moved by an
/// independent uniform offset in `[-δ, δ]`, one approximant per δ. Centers
/// are the identity map.
pub fn jittered_design(limit_size: usize, deltas: &[f64], seed: u64) -> Result<Design> {
    if limit_size == 0 {
        return Err(Error::input("grid size must be positive"));
    }
    if let Some(d) = deltas.iter().find(|d| !(**d >= 0.0) || !d.is_finite()) {
        return Err(Error::input(format!("jitter must be finite and nonnegative, got {d}")));
    }
    let base = midpoint_grid(limit_size);
    let limit = FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_line(&base)?);
    let mut approximants = Vec::new();
    for (s, &delta) in deltas.iter().enumerate() {
        let mut rng = substream(seed, s as u64);
        // One offset per point, drawn in [-1, 1] and scaled, so smaller δ
        // moves each point proportionally less.
        let pts: Vec<f64> = base.iter().map(|&x| x + delta * rng.random_range(-1.0..=1.0)).collect();
        approximants.push(FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_line(&pts)?));
    }
    Ok(Design {
        approximants,
        limit,
        centers: vec![(0..limit_size).collect(); deltas.len()],
        radii: RadiusFamily::new(vec![0.24, 0.26])?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub dmd_discrepancy: f64,
    pub ball_volume_sup_error: f64,
    /// (center, radius) pairs dropped as boundary ties.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Both flags mean strictly decreasing down the rows.
    pub monotone_dmd: bool,
    pub monotone_bv: bool,
}

impl ConvergenceReport {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![r.n.to_string(), r.dmd_discrepancy.to_string(), r.ball_volume_sup_error.to_string()])
            .collect()
    }
}

fn near_any(r: f64, distances: &[f64]) -> bool {
    distances.iter().any(|d| (d - r).abs() <= TIE_TOL)
}

fn ball_sup_error(x: &FiniteMetricMeasureSpace, limit: &FiniteMetricMeasureSpace, centers: &[usize], radii: &RadiusFamily) -> Result<(f64, usize)> {
    let mut err = 0.0f64;
    let mut skipped = 0;
    for (p, &c) in centers.iter().enumerate() {
        for &r in radii.radii() {
            if near_any(r, x.dist().row(p)) || near_any(r, limit.dist().row(c)) {
                skipped += 1;
                continue;
            }
            err = err.max((x.ball_volume(p, r)? - limit.ball_volume(c, r)?).abs());
        }
    }
    Ok((err, skipped))
}

fn strictly_decreasing(v: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = v.collect();
    v.windows(2).all(|w| w[1] < w[0])
}

/// Compare each approximant to the limit by distance-matrix discrepancy
/// (same seed for every space) and by the sup ball-volume error over the
/// center map and radii.
pub fn convergence_experiment(
    approximants: &[FiniteMetricMeasureSpace],
    limit: &FiniteMetricMeasureSpace,
    centers: &[Vec<usize>],
    radii: &RadiusFamily,
    k: usize,
    m: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    if centers.len() != approximants.len() {
        return Err(Error::input(format!("{} center maps for {} approximants", centers.len(), approximants.len())));
    }
    for (x, map) in approximants.iter().zip(centers) {
        if map.len() != x.len() {
            return Err(Error::input(format!("center map has {} entries for a {}-point space", map.len(), x.len())));
        }
        if let Some(&c) = map.iter().find(|&&c| c >= limit.len()) {
            return Err(Error::input(format!("center {c} out of range for the {}-point limit", limit.len())));
        }
    }
    let reference = sample_distance_matrices(limit, k, m, seed)?;
    let rows = approximants
        .par_iter()
        .zip(centers)
        .map(|(x, map)| {
            let sample = sample_distance_matrices(x, k, m, seed)?;
            let (err, skipped) = ball_sup_error(x, limit, map, radii)?;
            Ok(ConvergenceRow {
                n: x.len(),
                dmd_discrepancy: dmd_discrepancy(&sample, &reference)?,
                ball_volume_sup_error: err,
                skipped,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        monotone_dmd: strictly_decreasing(rows.iter().map(|r| r.dmd_discrepancy)),
        monotone_bv: strictly_decreasing(rows.iter().map(|r| r.ball_volume_sup_error)),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sequence_is_zero() {
        let d = uniform_grid_design(&[8], 8).unwrap();
        let xs = vec![d.limit.clone(); 3];
        let centers = vec![(0..8).collect(); 3];
        let rep = convergence_experiment(&xs, &d.limit, &centers, &d.radii, 3, 50, 1).unwrap();
        assert!(rep.rows.iter().all(|r| r.dmd_discrepancy == 0.0 && r.ball_volume_sup_error == 0.0));
    }

    #[test]
    fn grid_ball_errors_by_enumeration() {
        let d = uniform_grid_design(&[4, 8, 16, 32], 64).unwrap();
        let rep = convergence_experiment(&d.approximants, &d.limit, &d.centers, &d.radii, 2, 20, 3).unwrap();
        let errs: Vec<f64> = rep.rows.iter().map(|r| r.ball_volume_sup_error).collect();
        assert_eq!(errs, vec![0.234375, 0.109375, 0.046875, 0.015625]);
        assert!(rep.monotone_bv);
        assert!(rep.rows.iter().all(|r| r.skipped == 0));
    }

    #[test]
    fn ties_are_skipped() {
        let d = uniform_grid_design(&[4], 64).unwrap();
        let r = RadiusFamily::new(vec![0.25]).unwrap();
        let rep = convergence_experiment(&d.approximants, &d.limit, &d.centers, &r, 2, 5, 3).unwrap();
        assert_eq!(rep.rows[0].skipped, 4);
    }

    #[test]
    fn jittered_discrepancy_decreases() {
        let d = jittered_design(32, &[0.2, 0.1, 0.05, 0.0], 5).unwrap();
        let rep = convergence_experiment(&d.approximants, &d.limit, &d.centers, &d.radii, 3, 150, 8).unwrap();
        assert!(rep.monotone_dmd, "{rep:?}");
        assert_eq!(rep.rows[3].dmd_discrepancy, 0.0);
    }

    #[test]
    fn rejects_bad_center_map() {
        let d = uniform_grid_design(&[4], 8).unwrap();
        assert!(convergence_experiment(&d.approximants, &d.limit, &[vec![0, 1, 2]], &d.radii, 2, 5, 1).is_err());
        assert!(convergence_experiment(&d.approximants, &d.limit, &[vec![0, 1, 2, 99]], &d.radii, 2, 5, 1).is_err());
    }
}
