use std::collections::HashMap;

use super::diagram::PersistenceDiagram;
use super::rips::Filtration;
use crate::error::{Error, Result};

/// Sparse GF(2) column: sorted row indices.
type Column = Vec<usize>;

fn add_into(target: &mut Column, other: &Column) {
    let mut out = Vec::with_capacity(target.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&other[j..]);
    *target = out;
}

/// Result of the standard column reduction: for each column its pivot (lowest
/// nonzero row) after reduction, if any.
pub struct Reduction {
    pub low: Vec<Option<usize>>,
}

/// Boundary matrix of a filtration in filtration order.
pub fn boundary_matrix(f: &Filtration) -> Vec<Column> {
    let index: HashMap<&[usize], usize> = f
        .simplices()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices.as_slice(), i))
        .collect();
    f.simplices()
        .iter()
        .map(|s| {
            let mut col: Column = s.faces().map(|face| index[face.as_slice()]).collect();
            col.sort_unstable();
            col
        })
        .collect()
}

/// Left-to-right column reduction over GF(2).
pub fn reduce(mut columns: Vec<Column>) -> Reduction {
    let n = columns.len();
    let mut pivot_owner: Vec<Option<usize>> = vec![None; n];
    let mut low = vec![None; n];
    for j in 0..n {
        while let Some(&l) = columns[j].last() {
            match pivot_owner[l] {
                Some(k) => {
                    let other = std::mem::take(&mut columns[k]);
                    add_into(&mut columns[j], &other);
                    columns[k] = other;
                }
                None => {
                    pivot_owner[l] = Some(j);
                    low[j] = Some(l);
                    break;
                }
            }
        }
    }
    Reduction { low }
}

/// Degree-`k` persistence diagram of a filtration over GF(2).
///
/// Essential classes die at `alpha`; zero-length pairs are discarded; more
/// than `cap` pairs keeps the `cap` most persistent and sets the overflow flag.
pub fn persistent_homology(f: &Filtration, k: usize, alpha: f64, cap: usize) -> Result<PersistenceDiagram> {
    if alpha < f.max_scale() {
        return Err(Error::input(format!(
            "alpha = {alpha} must be at least the filtration's max_scale = {}",
            f.max_scale()
        )));
    }
    if k > f.max_dim() {
        return Ok(PersistenceDiagram::empty(alpha, cap)?.with_warning(format!(
            "homology degree {k} exceeds the filtration's max_dim {}",
            f.max_dim()
        )));
    }
    let simplices = f.simplices();
    let red = reduce(boundary_matrix(f));
    let mut killed = vec![false; simplices.len()];
    let mut raw = Vec::new();
    for (j, l) in red.low.iter().enumerate() {
        if let Some(i) = *l {
            killed[i] = true;
            if simplices[i].dim() == k {
                raw.push((simplices[i].entry, simplices[j].entry));
            }
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        if s.dim() == k && red.low[i].is_none() && !killed[i] {
            raw.push((s.entry, alpha));
        }
    }
    let diagram = PersistenceDiagram::capped(raw, alpha, cap)?;
    Ok(if k == f.max_dim() {
        diagram.with_warning(format!(
            "homology degree {k} equals max_dim; classes cannot die inside the truncated complex"
        ))
    } else {
        diagram
    })
}
