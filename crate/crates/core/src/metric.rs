//! Point clouds, validated distance matrices and finite metric measure spaces.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for symmetry, diagonal and triangle checks.
pub const METRIC_TOL: f64 = 1e-9;
/// Absolute tolerance on the total mass of a probability vector.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    label: Option<String>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>, label: Option<String>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::input("point cloud must contain at least one point"));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::input("points must have dimension at least 1"));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::input(format!(
                "dimension mismatch: point 0 has {dim} coordinates, point {i} has {}",
                p.len()
            )));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::input("point coordinates must be finite"));
        }
        Ok(PointCloud { points, label })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}

/// Minkowski exponent for [`DistanceMatrix::from_point_cloud`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Minkowski {
    L1,
    L2,
    LInf,
}

impl Minkowski {
    pub fn from_exponent(p: f64) -> Result<Self> {
        match p {
            p if p == 1.0 => Ok(Minkowski::L1),
            p if p == 2.0 => Ok(Minkowski::L2),
            p if p == f64::INFINITY => Ok(Minkowski::LInf),
            _ => Err(Error::input(format!("unsupported Minkowski exponent {p}; use 1, 2 or inf"))),
        }
    }

    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Minkowski::L1 => diffs.sum(),
            Minkowski::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Minkowski::LInf => diffs.fold(0.0, f64::max),
        }
    }
}

/// Symmetric, zero-diagonal matrix satisfying the triangle inequality.
///
/// Distinct indices may sit at distance zero (duplicate points), so strictly
/// speaking this is a pseudometric.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Build from row-major entries, validating every metric axiom.
    pub fn new(n: usize, mut d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::input(format!("expected {} entries for a {n}x{n} matrix, got {}", n * n, d.len())));
        }
        for i in 0..n {
            let dii = d[i * n + i];
            if !dii.is_finite() || dii.abs() > METRIC_TOL {
                return Err(Error::input(format!("nonzero diagonal entry d({i},{i}) = {dii}")));
            }
            d[i * n + i] = 0.0;
            for j in (i + 1)..n {
                let (a, b) = (d[i * n + j], d[j * n + i]);
                if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
                    return Err(Error::input(format!("entry ({i},{j}) must be finite and nonnegative")));
                }
                if (a - b).abs() > METRIC_TOL {
                    return Err(Error::input(format!("asymmetric entries d({i},{j}) = {a}, d({j},{i}) = {b}")));
                }
                d[j * n + i] = a;
            }
        }
        let dm = DistanceMatrix { n, d };
        if let Some((i, j, k)) = dm.triangle_violation() {
            return Err(Error::input(format!(
                "triangle inequality fails: d({i},{k}) = {} > d({i},{j}) + d({j},{k}) = {}",
                dm.get(i, k),
                dm.get(i, j) + dm.get(j, k)
            )));
        }
        Ok(dm)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::input(format!("row {i} has {} entries, expected {n}", r.len())));
        }
        Self::new(n, rows.concat())
    }

    pub fn from_point_cloud(pc: &PointCloud, metric: Minkowski) -> Result<Self> {
        let n = pc.len();
        let pts = pc.points();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = metric.distance(&pts[i], &pts[j]);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self::new(n, d)
    }

    /// Distance matrix of points on a line.
    pub fn from_line(xs: &[f64]) -> Result<Self> {
        let n = xs.len();
        Self::new(n, (0..n * n).map(|k| (xs[k / n] - xs[k % n]).abs()).collect())
    }

    fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let dij = self.get(i, j);
                for k in 0..n {
                    if self.get(i, k) > dij + self.get(j, k) + METRIC_TOL {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest strictly positive off-diagonal entry.
    pub fn min_positive(&self) -> Option<f64> {
        self.d.iter().copied().filter(|&x| x > 0.0).min_by(f64::total_cmp)
    }

    /// Distinct off-diagonal values, ascending (zero included if present).
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.n)
            .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Restriction to `indices` (repetitions allowed, giving zero distances).
    pub fn submatrix(&self, indices: &[usize]) -> DistanceMatrix {
        let k = indices.len();
        let d = (0..k * k).map(|t| self.get(indices[t / k], indices[t % k])).collect();
        DistanceMatrix { n: k, d }
    }

    /// Upper-triangle entries in row order.
    pub fn upper_triangle(&self) -> Vec<f64> {
        (0..self.n)
            .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }
}

/// `(X, d, μ)` with μ a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricMeasureSpace {
    dist: DistanceMatrix,
    weights: Vec<f64>,
}

impl FiniteMetricMeasureSpace {
    pub fn new(dist: DistanceMatrix, weights: Vec<f64>) -> Result<Self> {
        check_probability(&weights, dist.len())?;
        Ok(FiniteMetricMeasureSpace { dist, weights })
    }

    pub fn uniform(dist: DistanceMatrix) -> Self {
        let n = dist.len();
        FiniteMetricMeasureSpace {
            dist,
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn dist(&self) -> &DistanceMatrix {
        &self.dist
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// μ(A) for an index set, summed exactly and rounded once so the
    /// value does not depend on the order of `set`.
    pub fn mass(&self, set: &[usize]) -> f64 {
        exact_sum(set.iter().map(|&i| self.weights[i]))
    }

    pub fn ball(&self, center: usize, radius: f64) -> Result<Ball> {
        self.check_index(center)?;
        if !(radius >= 0.0) {
            return Err(Error::input(format!("radius must be nonnegative, got {radius}")));
        }
        let members = (0..self.len())
            .filter(|&j| self.dist.get(center, j) <= radius)
            .collect();
        Ok(Ball {
            center,
            radius,
            members,
        })
    }

    /// μ(B_r(center)) for the closed ball.
    pub fn ball_volume(&self, center: usize, radius: f64) -> Result<f64> {
        Ok(self.mass(&self.ball(center, radius)?.members))
    }

    /// Largest observed ratio μ(B_{2ε}(x)) / μ(B_ε(x)) over all centers and the given radii.
    pub fn doubling_constant(&self, radii: &[f64]) -> Result<DoublingEstimate> {
        if radii.is_empty() {
            return Err(Error::input("doubling_constant needs at least one radius"));
        }
        if let Some(r) = radii.iter().find(|&&r| !(r > 0.0)) {
            return Err(Error::input(format!("radii must be positive, got {r}")));
        }
        let mut best = 1.0f64;
        for x in 0..self.len() {
            for &r in radii {
                let small = self.ball_volume(x, r)?;
                if small <= 0.0 {
                    return Ok(DoublingEstimate::Unbounded { center: x, radius: r });
                }
                best = best.max(self.ball_volume(x, 2.0 * r)? / small);
            }
        }
        Ok(DoublingEstimate::Bounded(best))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::input(format!("index {i} out of range for a {}-point space", self.len())));
        }
        Ok(())
    }
}

/// Sum of floats computed in exact rational arithmetic, rounded once.
pub fn exact_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = BigRational::zero();
    let mut count = 0usize;
    let mut last = 0.0;
    for v in values {
        acc += BigRational::from_float(v).expect("finite summand");
        count += 1;
        last = v;
    }
    match count {
        0 => 0.0,
        1 => last,
        _ => acc.to_f64().expect("representable sum"),
    }
}

/// Validate a probability vector of length `n`.
pub fn check_probability(weights: &[f64], n: usize) -> Result<()> {
    if weights.len() != n {
        return Err(Error::input(format!("expected {n} weights, got {}", weights.len())));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::input(format!("weights must be finite and nonnegative, got {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::input(format!("weights must sum to 1, got {total}")));
    }
    Ok(())
}

/// Closed ball `{j : d(center, j) ≤ radius}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DoublingEstimate {
    Bounded(f64),
    /// Some ball of positive radius has zero mass.
    Unbounded { center: usize, radius: f64 },
}
