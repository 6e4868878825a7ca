use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

/// A finite sample of the diagonal `y = x`, stored by diagonal coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalGrid {
    eps: f64,
    anchors: Vec<f64>,
}

impl DiagonalGrid {
    /// Anchors `(m·ε, m·ε)` for `0 ≤ m ≤ ⌈α/ε⌉`.
    pub fn uniform(eps: f64, alpha: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::input(format!("grid spacing must be positive, got {eps}")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::input(format!("alpha must be positive, got {alpha}")));
        }
        let steps = (alpha / eps).ceil() as usize;
        Ok(DiagonalGrid {
            eps,
            anchors: (0..=steps).map(|m| m as f64 * eps).collect(),
        })
    }

    /// Arbitrary anchors; `eps` is recorded as the nominal spacing.
    pub fn from_anchors(eps: f64, mut anchors: Vec<f64>) -> Result<Self> {
        if anchors.is_empty() || anchors.iter().any(|a| !a.is_finite()) {
            return Err(Error::input("a diagonal grid needs at least one finite anchor"));
        }
        anchors.sort_by(f64::total_cmp);
        anchors.dedup();
        Ok(DiagonalGrid { eps, anchors })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn anchors(&self) -> &[f64] {
        &self.anchors
    }

    /// Nearest anchor to `(birth, death)` in L∞ and its distance.
    pub fn nearest(&self, birth: f64, death: f64) -> (f64, f64) {
        let cost = |a: f64| (birth - a).abs().max((death - a).abs());
        // max(|b − a|, |d − a|) is convex in a with its minimum at the midpoint.
        let mid = 0.5 * (birth + death);
        let k = self.anchors.partition_point(|&a| a < mid);
        [k.checked_sub(1), Some(k)]
            .into_iter()
            .flatten()
            .filter_map(|i| self.anchors.get(i).copied())
            .map(|a| (a, cost(a)))
            .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)))
            .expect("grid is nonempty")
    }

    /// The anchor closest to the origin.
    pub fn origin_anchor(&self) -> f64 {
        *self
            .anchors
            .iter()
            .min_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)))
            .expect("grid is nonempty")
    }
}

/// A diagram lifted into the discretized space: its off-diagonal points plus
/// the representative anchor of the collapsed diagonal class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsDiagram {
    pub pairs: Vec<(f64, f64)>,
    pub diagonal_class: (f64, f64),
    pub alpha: f64,
    #[serde(rename = "N")]
    pub cap: usize,
}

/// Section of the quotient map: off-diagonal points are kept as they are and
/// the diagonal class is represented by the anchor nearest the origin.
pub fn p_eps_section(d: &PersistenceDiagram, grid: &DiagonalGrid) -> EpsDiagram {
    let a = grid.origin_anchor();
    EpsDiagram {
        pairs: d.pairs().to_vec(),
        diagonal_class: (a, a),
        alpha: d.alpha(),
        cap: d.cap(),
    }
}

/// The quotient map back to the bounded diagram space: diagonal content is
/// forgotten.
pub fn p_eps(d: &EpsDiagram) -> Result<PersistenceDiagram> {
    let pairs = d.pairs.iter().copied().filter(|(b, de)| b < de).collect();
    PersistenceDiagram::new(pairs, d.alpha, d.cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_covers_box() {
        let g = DiagonalGrid::uniform(0.3, 1.0).unwrap();
        assert_eq!(g.anchors().len(), 5);
        assert!(*g.anchors().last().unwrap() >= 1.0);
        assert!(DiagonalGrid::uniform(0.0, 1.0).is_err());
    }

    #[test]
    fn nearest_anchor() {
        let g = DiagonalGrid::from_anchors(0.75, vec![0.75, 1.5]).unwrap();
        assert_eq!(g.nearest(0.0, 2.0), (0.75, 1.25));
        let g = DiagonalGrid::uniform(0.5, 2.0).unwrap();
        assert_eq!(g.nearest(0.0, 2.0), (1.0, 1.0));
    }

    #[test]
    fn section_law() {
        let g = DiagonalGrid::uniform(0.1, 1.0).unwrap();
        let d = PersistenceDiagram::new(vec![(0.1, 0.5), (0.2, 0.9)], 1.0, 4).unwrap();
        let lifted = p_eps_section(&d, &g);
        assert_eq!(lifted.pairs, d.pairs());
        assert_eq!(lifted.diagonal_class, (0.0, 0.0));
        assert_eq!(p_eps(&lifted).unwrap(), d);

        let empty = PersistenceDiagram::empty(1.0, 4).unwrap();
        let lifted = p_eps_section(&empty, &g);
        assert!(lifted.pairs.is_empty());
        assert_eq!(p_eps(&lifted).unwrap(), empty);
    }
}
