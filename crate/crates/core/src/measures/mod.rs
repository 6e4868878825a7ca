//! Measure-theoretic constructions on finite metric measure spaces: outer
//! measures from ball covers, the determined-by-balls check, Wasserstein and
//! Lévy–Prokhorov distances, distance-matrix sampling, and the convergence
//! harness.

mod convergence;
mod cover;
mod dmd;
mod prokhorov;
mod rank;
mod transport;

pub use convergence::{convergence_experiment, jittered_design, uniform_grid_design, ConvergenceReport, ConvergenceRow, Design};
pub use cover::{caratheodory_outer, caratheodory_outer_with, mu_star, mu_star_with, CoverClass};
pub use dmd::{dmd_discrepancy, dmd_permutation_test, sample_distance_matrices, DistanceMatrixSample, DmdTest};
pub use prokhorov::{prokhorov, PROKHOROV_MAX_POINTS};
pub use rank::{determined_by_balls, Determinacy};
pub use transport::{transport, wasserstein, TransportPlan, Transport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricMeasureSpace;

/// A finite, ascending set of positive radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusFamily {
    radii: Vec<f64>,
}

impl RadiusFamily {
    pub fn new(mut radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::input("radius family must be nonempty"));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
            return Err(Error::input(format!("radii must be positive and finite, got {r}")));
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        Ok(RadiusFamily { radii })
    }

    /// Every distinct positive distance of the space, the midpoints between
    /// consecutive ones, and half the smallest one. On a finite space the
    /// ball structure only changes at distance values, so this family sees
    /// every distinct ball.
    pub fn all(space: &FiniteMetricMeasureSpace) -> Self {
        let values: Vec<f64> = space.dist().distinct_values().into_iter().filter(|&v| v > 0.0).collect();
        if values.is_empty() {
            return RadiusFamily { radii: vec![1.0] };
        }
        let mut radii = vec![0.5 * values[0]];
        for w in values.windows(2) {
            radii.push(0.5 * (w[0] + w[1]));
        }
        radii.extend(values);
        Self::new(radii).expect("positive distances")
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }
}

/// Config-level radius choice: `"all"` or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiusSpec {
    Named(RadiusKeyword),
    List(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusKeyword {
    All,
}

impl RadiusSpec {
    pub fn resolve(&self, space: &FiniteMetricMeasureSpace) -> Result<RadiusFamily> {
        match self {
            RadiusSpec::Named(RadiusKeyword::All) => Ok(RadiusFamily::all(space)),
            RadiusSpec::List(v) => RadiusFamily::new(v.clone()),
        }
    }
}

/// Index set → bitmask, checking range and the 64-point limit of the exact solvers.
pub(crate) fn mask_of(set: &[usize], n: usize) -> Result<u64> {
    if n > 64 {
        return Err(Error::Capability(format!("exact subset solvers support at most 64 points, got {n}")));
    }
    let mut mask = 0u64;
    for &i in set {
        if i >= n {
            return Err(Error::input(format!("index {i} out of range for a {n}-point space")));
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

pub(crate) fn indices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}
