use std::collections::HashMap;

use serde::Serialize;

use super::complex::{Complex, Direction, ZigzagComplexSequence};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Matrix};

/// One arrow of a zigzag module, with its matrix in the bases of its
/// source (columns) and target (rows).
#[derive(Debug, Clone, PartialEq)]
pub struct ZigzagArrow {
    pub direction: Direction,
    pub map: Matrix,
}

/// A representation of an `A_n` quiver over GF(2).
#[derive(Debug, Clone, PartialEq)]
pub struct ZigzagModule {
    dims: Vec<usize>,
    arrows: Vec<ZigzagArrow>,
}

impl ZigzagModule {
    pub fn new(dims: Vec<usize>, arrows: Vec<ZigzagArrow>) -> Result<Self> {
        if dims.is_empty() && !arrows.is_empty() || !dims.is_empty() && arrows.len() + 1 != dims.len() {
            return Err(Error::input(format!("{} nodes need {} arrows, got {}", dims.len(), dims.len().saturating_sub(1), arrows.len())));
        }
        for (a, arrow) in arrows.iter().enumerate() {
            let (s, t) = arrow.direction.endpoints(a);
            if arrow.map.rows() != dims[t] || arrow.map.cols() != dims[s] {
                return Err(Error::input(format!(
                    "arrow {a} has shape {}x{}, expected {}x{}",
                    arrow.map.rows(),
                    arrow.map.cols(),
                    dims[t],
                    dims[s]
                )));
            }
        }
        Ok(ZigzagModule { dims, arrows })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn arrows(&self) -> &[ZigzagArrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// The same module read right to left.
    pub fn reversed(&self) -> ZigzagModule {
        let dims = self.dims.iter().rev().copied().collect();
        let arrows = self
            .arrows
            .iter()
            .rev()
            .map(|a| ZigzagArrow {
                direction: a.direction.flip(),
                map: a.map.clone(),
            })
            .collect();
        ZigzagModule { dims, arrows }
    }

    /// Compact description for reports.
    pub fn summary(&self) -> ModuleSummary {
        ModuleSummary {
            dims: self.dims.clone(),
            directions: self.arrows.iter().map(|a| a.direction).collect(),
            ranks: self.arrows.iter().map(|a| a.map.rank()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleSummary {
    pub dims: Vec<usize>,
    pub directions: Vec<Direction>,
    pub ranks: Vec<usize>,
}

/// Degree-`k` homology of one complex with chosen cycle representatives and
/// a reducer that expresses any cycle in those representatives mod boundaries.
struct NodeHomology {
    reps: Vec<BitVec>,
    /// leading index → (reduced vector, homology combination)
    pivots: HashMap<usize, (BitVec, BitVec)>,
}

impl NodeHomology {
    fn compute(complex: &Complex, k: usize) -> Self {
        let chains = complex.simplices(k);
        let n = chains.len();
        let boundary_cols = |d: usize| -> Vec<BitVec> {
            // ∂ of every d-simplex as a vector over the (d−1)-simplices.
            let faces = complex.simplices(d - 1).len();
            complex
                .simplices(d)
                .iter()
                .map(|s| {
                    BitVec::from_indices(
                        faces,
                        (0..s.len()).map(|skip| {
                            let face: Vec<usize> = s
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &v)| v)
                                .collect();
                            complex.position(&face).expect("complex is closed under faces")
                        }),
                    )
                })
                .collect()
        };
        let cycles: Vec<BitVec> = if k == 0 {
            (0..n).map(|i| BitVec::unit(n, i)).collect()
        } else {
            Matrix::from_columns(complex.simplices(k - 1).len(), &boundary_cols(k)).kernel()
        };
        let boundaries = if complex.simplices(k + 1).is_empty() {
            Vec::new()
        } else {
            boundary_cols(k + 1)
        };

        let mut h = NodeHomology {
            reps: Vec::new(),
            pivots: HashMap::new(),
        };
        // Upper bound on the number of representatives, fixed up front so
        // combination vectors have a stable length.
        let width = cycles.len();
        for b in boundaries {
            h.insert(b, BitVec::zeros(width), None);
        }
        for z in cycles {
            let tag = h.reps.len();
            h.insert(z.clone(), BitVec::zeros(width), Some((tag, z)));
        }
        let dim = h.reps.len();
        for (_, comb) in h.pivots.values_mut() {
            *comb = comb.slice(0, dim);
        }
        h
    }

    fn reduce(&self, mut v: BitVec, mut comb: BitVec) -> (BitVec, BitVec) {
        while let Some(l) = v.leading() {
            match self.pivots.get(&l) {
                Some((p, c)) => {
                    v.xor_assign(p);
                    comb.xor_assign(c);
                }
                None => break,
            }
        }
        (v, comb)
    }

    fn insert(&mut self, v: BitVec, comb: BitVec, new_rep: Option<(usize, BitVec)>) {
        let (r, mut c) = self.reduce(v, comb);
        let Some(l) = r.leading() else {
            return;
        };
        if let Some((tag, rep)) = new_rep {
            c.flip(tag);
            self.reps.push(rep);
        }
        self.pivots.insert(l, (r, c));
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cycle in the representative basis.
    fn coordinates(&self, z: BitVec) -> BitVec {
        let (rest, comb) = self.reduce(z, BitVec::zeros(self.dim()));
        debug_assert!(rest.is_zero(), "vector is not a cycle of this complex");
        comb
    }
}

/// GF(2) homology in degree `k` at every node, with the maps induced by the
/// inclusions.
///
/// Degrees above `max_dim − 1` give the zero module since the truncated
/// complexes carry no boundaries there.
pub fn homology_zigzag(seq: &ZigzagComplexSequence, k: usize) -> ZigzagModule {
    let nodes = seq.nodes();
    if k + 1 > seq.max_dim() {
        let dims = vec![0; nodes.len()];
        let arrows = seq
            .arrows()
            .iter()
            .map(|&direction| ZigzagArrow {
                direction,
                map: Matrix::zeros(0, 0),
            })
            .collect();
        return ZigzagModule { dims, arrows };
    }
    let homology: Vec<NodeHomology> = nodes.iter().map(|c| NodeHomology::compute(c, k)).collect();
    let arrows = seq
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &direction)| {
            let (s, t) = direction.endpoints(a);
            let (small, large) = (&nodes[s], &nodes[t]);
            let chains_small = small.simplices(k);
            let width = large.simplices(k).len();
            let columns: Vec<BitVec> = homology[s]
                .reps
                .iter()
                .map(|rep| {
                    let pushed = BitVec::from_indices(
                        width,
                        rep.ones().map(|i| large.position(&chains_small[i]).expect("inclusion of complexes")),
                    );
                    homology[t].coordinates(pushed)
                })
                .collect();
            ZigzagArrow {
                direction,
                map: Matrix::from_columns(homology[t].dim(), &columns),
            }
        })
        .collect();
    ZigzagModule {
        dims: homology.iter().map(NodeHomology::dim).collect(),
        arrows,
    }
}
