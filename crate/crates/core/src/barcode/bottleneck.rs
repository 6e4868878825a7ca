use serde::Serialize;

use super::grid::DiagonalGrid;
use super::matching::max_matching;
use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

/// Which diagram a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedPair {
    pub first: usize,
    pub second: usize,
    pub cost: f64,
}

/// A point sent to the diagonal (or to a grid anchor, in the discretized metric).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalAssignment {
    pub side: Side,
    pub index: usize,
    /// Diagonal coordinate of the target point `(t, t)`.
    pub target: f64,
    pub cost: f64,
}

/// Witness of an optimal matching; `cost` is the max over all listed edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingCertificate {
    pub pairs: Vec<MatchedPair>,
    pub unmatched: Vec<DiagonalAssignment>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bottleneck {
    pub dist: f64,
    pub cert: MatchingCertificate,
}

pub fn linf(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

/// How unmatched points are charged.
#[derive(Clone, Copy)]
enum Diagonal<'a> {
    /// L∞ distance to the diagonal, `(death − birth) / 2`, at the projection.
    Exact,
    /// L∞ distance to the nearest grid anchor.
    Grid(&'a DiagonalGrid),
}

impl Diagonal<'_> {
    fn assign(self, (b, d): (f64, f64)) -> (f64, f64) {
        match self {
            Diagonal::Exact => (0.5 * (b + d), 0.5 * (d - b)),
            Diagonal::Grid(g) => g.nearest(b, d),
        }
    }
}

fn check_pair(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<()> {
    if d1.alpha() != d2.alpha() {
        return Err(Error::input(format!("alpha mismatch: {} vs {}", d1.alpha(), d2.alpha())));
    }
    if d1.overflow() || d2.overflow() {
        return Err(Error::input("overflowed diagrams have no distance; raise N"));
    }
    Ok(())
}

/// Bottleneck matching with a configurable diagonal.
///
/// Left vertices are the points of `d1` followed by one diagonal slot per
/// point of `d2`; right vertices are the points of `d2` followed by one slot
/// per point of `d1`. Slot-to-slot edges are free. The optimum is one of the
/// edge costs, found by binary search over the sorted candidates with a
/// perfect-matching test at each threshold.
fn solve(d1: &PersistenceDiagram, d2: &PersistenceDiagram, diag: Diagonal<'_>) -> Bottleneck {
    let (p, q) = (d1.pairs(), d2.pairs());
    let (m, n) = (p.len(), q.len());
    let diag_p: Vec<(f64, f64)> = p.iter().map(|&x| diag.assign(x)).collect();
    let diag_q: Vec<(f64, f64)> = q.iter().map(|&x| diag.assign(x)).collect();
    let cross: Vec<Vec<f64>> = p.iter().map(|&a| q.iter().map(|&b| linf(a, b)).collect()).collect();

    let mut candidates: Vec<f64> = cross.iter().flatten().copied().collect();
    candidates.extend(diag_p.iter().map(|x| x.1));
    candidates.extend(diag_q.iter().map(|x| x.1));
    candidates.push(0.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let matching_at = |c: f64| -> Option<Vec<Option<usize>>> {
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(m + n);
        for i in 0..m {
            let mut row: Vec<usize> = (0..n).filter(|&j| cross[i][j] <= c).collect();
            if diag_p[i].1 <= c {
                row.push(n + i);
            }
            adj.push(row);
        }
        for j in 0..n {
            let mut row = Vec::with_capacity(m + 1);
            if diag_q[j].1 <= c {
                row.push(j);
            }
            row.extend(n..n + m);
            adj.push(row);
        }
        let matched = max_matching(&adj, n + m);
        matched.iter().all(Option::is_some).then_some(matched)
    };

    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matching_at(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let dist = candidates[lo];
    let matched = matching_at(dist).expect("the largest candidate always admits a perfect matching");

    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    for (i, slot) in matched.iter().take(m).enumerate() {
        let j = slot.expect("perfect matching");
        if j < n {
            pairs.push(MatchedPair {
                first: i,
                second: j,
                cost: cross[i][j],
            });
        } else {
            unmatched.push(DiagonalAssignment {
                side: Side::First,
                index: i,
                target: diag_p[i].0,
                cost: diag_p[i].1,
            });
        }
    }
    for (j, slot) in matched.iter().skip(m).enumerate() {
        if slot.expect("perfect matching") == j {
            unmatched.push(DiagonalAssignment {
                side: Side::Second,
                index: j,
                target: diag_q[j].0,
                cost: diag_q[j].1,
            });
        }
    }
    let cost = pairs
        .iter()
        .map(|e| e.cost)
        .chain(unmatched.iter().map(|e| e.cost))
        .fold(0.0, f64::max);
    debug_assert_eq!(cost, dist);
    Bottleneck {
        dist,
        cert: MatchingCertificate {
            pairs,
            unmatched,
            cost,
        },
    }
}

/// Exact bottleneck distance with an optimal matching certificate.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<Bottleneck> {
    check_pair(d1, d2)?;
    Ok(solve(d1, d2, Diagonal::Exact))
}

/// Bottleneck distance in the discretized space: unmatched points pay their
/// L∞ distance to the nearest grid anchor.
pub fn bottleneck_eps(d1: &PersistenceDiagram, d2: &PersistenceDiagram, grid: &DiagonalGrid) -> Result<Bottleneck> {
    check_pair(d1, d2)?;
    Ok(solve(d1, d2, Diagonal::Grid(grid)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dgm(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(pairs.to_vec(), 4.0, 8).unwrap()
    }

    #[test]
    fn examples() {
        let a = dgm(&[(0.0, 2.0)]);
        let e = dgm(&[]);
        assert_eq!(bottleneck(&a, &a).unwrap().dist, 0.0);
        let r = bottleneck(&a, &e).unwrap();
        assert_eq!(r.dist, 1.0);
        assert_eq!(r.cert.unmatched.len(), 1);
        assert_eq!(r.cert.unmatched[0].target, 1.0);
        let b = dgm(&[(0.0, 2.0), (0.0, 4.0)]);
        assert_eq!(bottleneck(&b, &a).unwrap().dist, 2.0);
        assert_eq!(bottleneck(&e, &e).unwrap().dist, 0.0);
    }

    #[test]
    fn discretized_examples() {
        let a = dgm(&[(0.0, 2.0)]);
        let e = dgm(&[]);
        let g = DiagonalGrid::uniform(0.5, 4.0).unwrap();
        assert_eq!(bottleneck_eps(&a, &e, &g).unwrap().dist, 1.0);
        let coarse = DiagonalGrid::from_anchors(0.75, vec![0.75, 1.5]).unwrap();
        let r = bottleneck_eps(&a, &e, &coarse).unwrap();
        assert_eq!(r.dist, 1.25);
        assert_eq!(r.cert.unmatched[0].target, 0.75);
        assert_eq!(bottleneck_eps(&a, &a, &coarse).unwrap().dist, 0.0);
    }

    #[test]
    fn rejects_mismatched_boxes() {
        let a = PersistenceDiagram::new(vec![], 1.0, 2).unwrap();
        let b = PersistenceDiagram::new(vec![], 2.0, 2).unwrap();
        assert!(bottleneck(&a, &b).is_err());
        let over = PersistenceDiagram::capped(vec![(0.0, 0.5), (0.0, 0.6)], 1.0, 1).unwrap();
        assert!(bottleneck(&a, &over).is_err());
    }

    #[test]
    fn certificate_attains_distance() {
        let a = dgm(&[(0.0, 1.0), (1.0, 3.0), (0.5, 0.7)]);
        let b = dgm(&[(0.1, 1.2), (1.5, 2.5)]);
        let r = bottleneck(&a, &b).unwrap();
        assert_eq!(r.cert.cost, r.dist);
        assert_eq!(r.cert.pairs.len() * 2 + r.cert.unmatched.len(), 5);
    }
}
