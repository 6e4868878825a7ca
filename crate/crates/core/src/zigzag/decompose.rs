use serde::{Deserialize, Serialize};

use super::homology::ZigzagModule;
use crate::gf2::{BitVec, Matrix};

/// Multiset of closed node intervals `[i, j]`, 1-based, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagBarcode {
    nodes: usize,
    intervals: Vec<(usize, usize)>,
}

impl ZigzagBarcode {
    pub fn new(nodes: usize, mut intervals: Vec<(usize, usize)>) -> crate::Result<Self> {
        if let Some(&(i, j)) = intervals.iter().find(|&&(i, j)| !(1 <= i && i <= j && j <= nodes)) {
            return Err(crate::Error::input(format!("interval [{i}, {j}] outside nodes 1..={nodes}")));
        }
        intervals.sort_unstable();
        Ok(ZigzagBarcode { nodes, intervals })
    }

    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of intervals containing every node of `[i, j]` (1-based).
    pub fn covering(&self, i: usize, j: usize) -> usize {
        self.intervals.iter().filter(|&&(a, b)| a <= i && j <= b).count()
    }
}

/// Rank of the canonical map from the limit to the colimit of the module
/// restricted to nodes `lo..=hi` (0-based). For an interval decomposable
/// module this counts the summands whose support contains `[lo, hi]`.
pub fn generalized_rank(m: &ZigzagModule, lo: usize, hi: usize) -> usize {
    let dims = m.dims();
    if lo == hi {
        return dims[lo];
    }
    let mut offset = vec![0; hi - lo + 2];
    for t in lo..=hi {
        offset[t - lo + 1] = offset[t - lo] + dims[t];
    }
    let total = offset[hi - lo + 1];
    if total == 0 {
        return 0;
    }
    let at = |t: usize| offset[t - lo];

    // Limit: families (x_t) with f_a(x_s) = x_t for every arrow a: s → t.
    let mut constraint_rows: Vec<BitVec> = Vec::new();
    // Colimit relations: ι_s(y) − ι_t(f_a y) for y in the source of a.
    let mut relations: Vec<BitVec> = Vec::new();
    for a in lo..hi {
        let arrow = &m.arrows()[a];
        let (s, t) = arrow.direction.endpoints(a);
        for r in 0..dims[t] {
            let mut row = BitVec::zeros(total);
            for c in arrow.map.row(r).ones() {
                row.flip(at(s) + c);
            }
            row.flip(at(t) + r);
            constraint_rows.push(row);
        }
        for c in 0..dims[s] {
            let mut col = BitVec::unit(total, at(s) + c);
            for r in 0..dims[t] {
                if arrow.map.get(r, c) {
                    col.flip(at(t) + r);
                }
            }
            relations.push(col);
        }
    }
    let limit = Matrix::from_rows(total, constraint_rows).kernel();
    let relation_rank = Matrix::from_columns(total, &relations).rank();
    let mut columns = relations;
    for x in limit {
        // Any single component represents the family's class in the colimit.
        columns.push(BitVec::from_indices(
            total,
            x.ones().filter(|&i| i >= at(lo) && i < at(lo) + dims[lo]),
        ));
    }
    Matrix::from_columns(total, &columns).rank() - relation_rank
}

/// Interval barcode of a zigzag module.
///
/// Multiplicities come from Möbius inversion of the generalized rank over
/// node intervals:
/// `m[i, j] = rk[i, j] − rk[i−1, j] − rk[i, j+1] + rk[i−1, j+1]`.
pub fn interval_decomposition(m: &ZigzagModule) -> ZigzagBarcode {
    let n = m.len();
    let mut rk = vec![vec![0usize; n]; n];
    for lo in 0..n {
        for hi in lo..n {
            rk[lo][hi] = generalized_rank(m, lo, hi);
        }
    }
    let get = |lo: isize, hi: usize| -> isize {
        if lo < 0 || hi >= n {
            0
        } else {
            rk[lo as usize][hi] as isize
        }
    };
    let mut intervals = Vec::new();
    for lo in 0..n {
        for hi in lo..n {
            let l = lo as isize;
            let mult = get(l, hi) - get(l - 1, hi) - get(l, hi + 1) + get(l - 1, hi + 1);
            debug_assert!(mult >= 0, "negative multiplicity at [{lo}, {hi}]");
            for _ in 0..mult.max(0) {
                intervals.push((lo + 1, hi + 1));
            }
        }
    }
    ZigzagBarcode::new(n, intervals).expect("intervals lie inside the node range")
}
