use rand::Rng;
use serde::Serialize;

use super::{check_grid, DiagramGenerator};
use crate::barcode::DiagramMetric;
use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;
use crate::rng::{derive_seed, substream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemoRow {
    pub n: usize,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminacyDemo {
    pub radii: Vec<f64>,
    pub centers: usize,
    pub rows: Vec<DemoRow>,
}

impl DeterminacyDemo {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| vec![r.n.to_string(), r.discrepancy.to_string()]).collect()
    }
}

fn distances_to(centers: &[PersistenceDiagram], sample: &[PersistenceDiagram], metric: &DiagramMetric) -> Result<Vec<Vec<f64>>> {
    centers
        .iter()
        .map(|c| sample.iter().map(|d| metric.distance(c, d)).collect())
        .collect()
}

/// For each sample size `n`, draw `n` diagrams from each generator and report
/// `sup |V̂_A(B_r(c)) − V̂_B(B_r(c))|` over a fixed set of centers and the
/// radius grid. Centers are `n_centers` draws from the equal mixture of the
/// two generators, taken once from a separate stream so every row uses the
/// same balls.
pub fn determinacy_demo(
    sizes: &[usize],
    gen_a: &DiagramGenerator,
    gen_b: &DiagramGenerator,
    radii: &[f64],
    n_centers: usize,
    metric: &DiagramMetric,
    seed: u64,
) -> Result<DeterminacyDemo> {
    check_grid(radii)?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::input("sample sizes must be a nonempty list of positive counts"));
    }
    if n_centers == 0 {
        return Err(Error::input("need at least one center"));
    }
    gen_a.validate()?;
    gen_b.validate()?;
    if gen_a.alpha() != gen_b.alpha() {
        return Err(Error::input("generators must share alpha"));
    }
    let mut pick = substream(derive_seed(seed, 0), 0);
    let centers = (0..n_centers)
        .map(|i| {
            let rng = &mut substream(derive_seed(seed, 1), i as u64);
            if pick.random::<bool>() {
                gen_a.sample_one(rng)
            } else {
                gen_b.sample_one(rng)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(sizes.len());
    for (s, &n) in sizes.iter().enumerate() {
        let a = gen_a.sample(n, derive_seed(seed, 2 + 2 * s as u64))?;
        let b = gen_b.sample(n, derive_seed(seed, 3 + 2 * s as u64))?;
        let da = distances_to(&centers, a.diagrams(), metric)?;
        let db = distances_to(&centers, b.diagrams(), metric)?;
        let mut sup = 0.0f64;
        for (ra, rb) in da.iter().zip(&db) {
            for &r in radii {
                let va = ra.iter().filter(|&&d| d <= r).count() as f64 / n as f64;
                let vb = rb.iter().filter(|&&d| d <= r).count() as f64 / n as f64;
                sup = sup.max((va - vb).abs());
            }
        }
        rows.push(DemoRow { n, discrepancy: sup });
    }
    Ok(DeterminacyDemo {
        radii: radii.to_vec(),
        centers: n_centers,
        rows,
    })
}
