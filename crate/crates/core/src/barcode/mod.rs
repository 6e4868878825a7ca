//! The bounded diagram space with its bottleneck metric, the diagonal-grid
//! discretization and its quotient map, and sample-level metric checks.

mod bottleneck;
mod grid;
pub mod matching;

pub use bottleneck::{bottleneck, bottleneck_eps, linf, Bottleneck, DiagonalAssignment, MatchedPair, MatchingCertificate, Side};
pub use grid::{p_eps, p_eps_section, DiagonalGrid, EpsDiagram};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

/// Metric used on diagram samples. Bottleneck is the default; the q-Wasserstein
/// matching distance is offered for ball statistics only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagramMetric {
    #[default]
    Bottleneck,
    BottleneckEps { grid: DiagonalGrid },
    Wasserstein { q: f64 },
}

impl DiagramMetric {
    pub fn distance(&self, a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<f64> {
        match self {
            DiagramMetric::Bottleneck => Ok(bottleneck(a, b)?.dist),
            DiagramMetric::BottleneckEps { grid } => Ok(bottleneck_eps(a, b, grid)?.dist),
            DiagramMetric::Wasserstein { q } => wasserstein_diagram(a, b, *q),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DiagramMetric::Bottleneck => "bottleneck",
            DiagramMetric::BottleneckEps { .. } => "bottleneck_eps",
            DiagramMetric::Wasserstein { .. } => "wasserstein",
        }
    }
}

/// q-Wasserstein matching distance with L∞ ground cost.
pub fn wasserstein_diagram(a: &PersistenceDiagram, b: &PersistenceDiagram, q: f64) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::input(format!("Wasserstein exponent must be a finite q >= 1, got {q}")));
    }
    if a.alpha() != b.alpha() {
        return Err(Error::input(format!("alpha mismatch: {} vs {}", a.alpha(), b.alpha())));
    }
    let (p, r) = (a.pairs(), b.pairs());
    let (m, n) = (p.len(), r.len());
    let diag = |(x, y): (f64, f64)| 0.5 * (y - x);
    let size = m + n;
    let mut cost = vec![vec![0.0; size]; size];
    for i in 0..size {
        for j in 0..size {
            cost[i][j] = match (i < m, j < n) {
                (true, true) => linf(p[i], r[j]).powf(q),
                (true, false) => {
                    if j - n == i {
                        diag(p[i]).powf(q)
                    } else {
                        f64::INFINITY
                    }
                }
                (false, true) => {
                    if i - m == j {
                        diag(r[j]).powf(q)
                    } else {
                        f64::INFINITY
                    }
                }
                (false, false) => 0.0,
            };
        }
    }
    // Forbidden edges get a finite cost larger than any feasible assignment.
    let big = 1.0 + cost.iter().flatten().filter(|c| c.is_finite()).sum::<f64>();
    for c in cost.iter_mut().flatten() {
        if c.is_infinite() {
            *c = big;
        }
    }
    let (total, _) = matching::hungarian(&cost);
    Ok(total.max(0.0).powf(1.0 / q))
}

/// Symmetric matrix of pairwise distances, computed in parallel over rows.
pub fn pairwise_distances(sample: &[PersistenceDiagram], metric: &DiagramMetric) -> Result<Vec<Vec<f64>>> {
    let n = sample.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).map(|j| metric.distance(&sample[i], &sample[j])).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for (off, &v) in upper[i].iter().enumerate() {
            let j = i + 1 + off;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    Ok(d)
}

pub const METRIC_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MetricReport {
    pub diagrams: usize,
    pub triples_checked: usize,
    pub symmetry_violations: usize,
    pub identity_violations: usize,
    pub triangle_violations: usize,
}

impl MetricReport {
    pub fn violations(&self) -> usize {
        self.symmetry_violations + self.identity_violations + self.triangle_violations
    }
}

/// Check symmetry, identity of indiscernibles and the triangle inequality
/// on every pair and ordered triple of a sample.
pub fn metric_check(sample: &[PersistenceDiagram], metric: &DiagramMetric) -> Result<MetricReport> {
    let n = sample.len();
    if n < 3 {
        return Err(Error::input(format!("metric_check needs at least 3 diagrams, got {n}")));
    }
    let mut d = vec![vec![0.0; n]; n];
    let mut report = MetricReport {
        diagrams: n,
        ..Default::default()
    };
    for i in 0..n {
        for j in 0..n {
            d[i][j] = metric.distance(&sample[i], &sample[j])?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if (d[i][j] - d[j][i]).abs() > METRIC_CHECK_TOL {
                report.symmetry_violations += 1;
            }
            let same = sample[i].pairs() == sample[j].pairs();
            if same != (d[i][j] <= METRIC_CHECK_TOL) {
                report.identity_violations += 1;
            }
            for k in 0..n {
                report.triples_checked += 1;
                if d[i][k] > d[i][j] + d[j][k] + METRIC_CHECK_TOL {
                    report.triangle_violations += 1;
                }
            }
        }
    }
    Ok(report)
}
