use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, Minkowski, PointCloud};
use crate::persistence::rips_simplices;

/// Orientation of the arrow between node `a` and node `a + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `node a → node a+1`
    Forward,
    /// `node a ← node a+1`
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    /// `(source, target)` node indices of arrow `a`.
    pub fn endpoints(self, a: usize) -> (usize, usize) {
        match self {
            Direction::Forward => (a, a + 1),
            Direction::Backward => (a + 1, a),
        }
    }
}

/// A finite simplicial complex on global vertex ids, simplices grouped by
/// dimension and sorted lexicographically within each group.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    by_dim: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Complex {
    pub fn new(simplices: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
        for s in simplices {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for group in &mut by_dim {
            group.sort();
            group.dedup();
        }
        let index = by_dim
            .iter()
            .map(|g| g.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Complex { by_dim, index }
    }

    /// Dimension-`d` simplices in their fixed order.
    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.by_dim.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn position(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.position(simplex).is_some()
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.by_dim.iter().flatten().all(|s| other.contains(s))
    }

    pub fn num_simplices(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }
}

/// `VR_ε(X_1) → VR_ε(X_1 ∪ X_2) ← VR_ε(X_2) → … ← VR_ε(X_J)` at a fixed scale.
///
/// Points of cloud `t` get global ids `offsets[t]..offsets[t + 1]`; clouds are
/// treated as disjoint even when coordinates coincide.
#[derive(Debug, Clone)]
pub struct ZigzagComplexSequence {
    nodes: Vec<Complex>,
    arrows: Vec<Direction>,
    scale: f64,
    max_dim: usize,
    clouds: usize,
}

impl ZigzagComplexSequence {
    pub fn nodes(&self) -> &[Complex] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[Direction] {
        &self.arrows
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Number of point clouds `J`; there are `2J − 1` nodes.
    pub fn num_clouds(&self) -> usize {
        self.clouds
    }
}

/// Build the union zigzag of an ordered list of point clouds.
pub fn union_zigzag(clouds: &[PointCloud], eps: f64, max_dim: usize) -> Result<ZigzagComplexSequence> {
    let Some(first) = clouds.first() else {
        return Err(Error::input("union zigzag needs at least one point cloud"));
    };
    if !(eps >= 0.0) {
        return Err(Error::input(format!("scale must be nonnegative, got {eps}")));
    }
    let dim = first.dim();
    if let Some((t, c)) = clouds.iter().enumerate().find(|(_, c)| c.dim() != dim) {
        return Err(Error::input(format!(
            "dimension mismatch: cloud 0 lives in R^{dim}, cloud {t} in R^{}",
            c.dim()
        )));
    }
    let mut offsets = vec![0];
    let mut all = Vec::new();
    for c in clouds {
        all.extend(c.points().iter().cloned());
        offsets.push(all.len());
    }
    let dm = DistanceMatrix::from_point_cloud(&PointCloud::new(all, None)?, Minkowski::L2)?;
    let ids = |t: usize| (offsets[t]..offsets[t + 1]).collect::<Vec<usize>>();
    let vr = |vertices: &[usize]| Complex::new(rips_simplices(&dm, vertices, eps, max_dim).into_iter().map(|s| s.vertices));

    let mut nodes = Vec::with_capacity(2 * clouds.len() - 1);
    let mut arrows = Vec::new();
    for t in 0..clouds.len() {
        nodes.push(vr(&ids(t)));
        if t + 1 < clouds.len() {
            let mut union = ids(t);
            union.extend(ids(t + 1));
            nodes.push(vr(&union));
            arrows.push(Direction::Forward);
            arrows.push(Direction::Backward);
        }
    }
    for (a, dir) in arrows.iter().enumerate() {
        let (s, t) = dir.endpoints(a);
        debug_assert!(nodes[s].is_subcomplex_of(&nodes[t]));
    }
    Ok(ZigzagComplexSequence {
        nodes,
        arrows,
        scale: eps,
        max_dim,
        clouds: clouds.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64) -> PointCloud {
        PointCloud::new(vec![vec![x, 0.0]], None).unwrap()
    }

    #[test]
    fn one_cloud_single_node() {
        let z = union_zigzag(&[pt(0.0)], 1.0, 1).unwrap();
        assert_eq!(z.nodes().len(), 1);
        assert!(z.arrows().is_empty());
    }

    #[test]
    fn two_close_points() {
        let z = union_zigzag(&[pt(0.0), pt(0.5)], 1.0, 1).unwrap();
        assert_eq!(z.nodes().len(), 3);
        assert!(z.nodes()[1].contains(&[0, 1]));
        assert_eq!(z.nodes()[0].num_simplices(), 1);
        assert_eq!(z.nodes()[1].num_simplices(), 3);
        for (a, d) in z.arrows().iter().enumerate() {
            let (s, t) = d.endpoints(a);
            assert!(z.nodes()[s].is_subcomplex_of(&z.nodes()[t]));
            assert!(!z.nodes()[t].is_subcomplex_of(&z.nodes()[s]));
        }
    }

    #[test]
    fn three_clouds_alternate() {
        let z = union_zigzag(&[pt(0.0), pt(1.0), pt(2.0)], 0.5, 1).unwrap();
        assert_eq!(z.nodes().len(), 5);
        assert_eq!(
            z.arrows(),
            &[Direction::Forward, Direction::Backward, Direction::Forward, Direction::Backward]
        );
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let c3 = PointCloud::new(vec![vec![0.0, 0.0, 0.0]], None).unwrap();
        assert!(union_zigzag(&[pt(0.0), c3], 1.0, 1).is_err());
        assert!(union_zigzag(&[], 1.0, 1).is_err());
    }
}
