use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{mask_of, RadiusFamily};
use crate::error::{Error, Result};
use crate::metric::FiniteMetricMeasureSpace;

/// Which balls may appear in a cover at scale ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverClass {
    /// Closed balls of any radius `r ≤ ε`.
    #[default]
    UpTo,
    /// Closed balls of radius exactly `ε`.
    Exactly,
}

#[derive(Clone)]
struct Candidate {
    /// Members intersected with the target set.
    hits: u64,
    cost: f64,
    exact: BigRational,
}

/// Distinct balls usable at scale `eps`, restricted to the target and with
/// dominated balls (covering no more of the target at no lower cost) removed.
fn candidates(space: &FiniteMetricMeasureSpace, target: u64, eps: f64, class: CoverClass) -> Vec<Candidate> {
    let n = space.len();
    let dm = space.dist();
    let mut balls: Vec<(u64, u64)> = Vec::new(); // (full members, hits)
    for x in 0..n {
        let radii: Vec<f64> = match class {
            CoverClass::Exactly => vec![eps],
            CoverClass::UpTo => {
                let mut r: Vec<f64> = dm.row(x).iter().copied().filter(|&d| d <= eps).collect();
                r.sort_by(f64::total_cmp);
                r.dedup();
                r
            }
        };
        for r in radii {
            let members = (0..n).filter(|&j| dm.get(x, j) <= r).fold(0u64, |m, j| m | 1 << j);
            let hits = members & target;
            if hits != 0 {
                balls.push((members, hits));
            }
        }
    }
    balls.sort_unstable();
    balls.dedup();
    let mut cands: Vec<Candidate> = balls
        .into_iter()
        .map(|(members, hits)| {
            let exact: BigRational = super::indices_of(members)
                .into_iter()
                .map(|i| BigRational::from_float(space.weights()[i]).expect("finite weight"))
                .sum();
            Candidate {
                hits,
                cost: exact.to_f64().expect("representable mass"),
                exact,
            }
        })
        .collect();
    cands.sort_by(|a, b| a.exact.cmp(&b.exact).then(b.hits.count_ones().cmp(&a.hits.count_ones())));
    let mut kept: Vec<Candidate> = Vec::with_capacity(cands.len());
    for c in cands {
        if !kept.iter().any(|k| k.exact <= c.exact && k.hits & c.hits == c.hits) {
            kept.push(c);
        }
    }
    kept
}

/// Float costs steer the pruning with a relative slack; leaves are compared
/// exactly so covers of equal true cost never lose to rounding.
const PRUNE_SLACK: f64 = 1e-9;

struct Search<'a> {
    cands: &'a [Candidate],
    best_cost: f64,
    best_exact: Option<BigRational>,
    stack: Vec<usize>,
}

impl Search<'_> {
    /// Largest over uncovered elements of the cheapest ball covering it.
    fn lower_bound(&self, uncovered: u64) -> f64 {
        let mut lb = 0.0f64;
        let mut rest = uncovered;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            let cheapest = self
                .cands
                .iter()
                .find(|c| c.hits >> e & 1 == 1)
                .map_or(f64::INFINITY, |c| c.cost);
            lb = lb.max(cheapest);
        }
        lb
    }

    fn run(&mut self, uncovered: u64, cost: f64) {
        if uncovered == 0 {
            let exact: BigRational = self.stack.iter().map(|&i| &self.cands[i].exact).sum();
            if self.best_exact.as_ref().is_none_or(|b| exact < *b) {
                self.best_cost = cost;
                self.best_exact = Some(exact);
            }
            return;
        }
        if cost + self.lower_bound(uncovered) > self.best_cost * (1.0 + PRUNE_SLACK) {
            return;
        }
        // Branch on the uncovered element with the fewest covering balls.
        let mut pick = 0;
        let mut fewest = usize::MAX;
        let mut rest = uncovered;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            let count = self.cands.iter().filter(|c| c.hits >> e & 1 == 1).count();
            if count < fewest {
                fewest = count;
                pick = e;
            }
        }
        for idx in 0..self.cands.len() {
            let (hits, c_cost) = (self.cands[idx].hits, self.cands[idx].cost);
            if hits >> pick & 1 == 0 {
                continue;
            }
            self.stack.push(idx);
            self.run(uncovered & !hits, cost + c_cost);
            self.stack.pop();
        }
    }
}

/// Carathéodory outer measure of `set` at scale `eps` with the default cover
/// class (closed balls of radius at most `eps`).
pub fn caratheodory_outer(space: &FiniteMetricMeasureSpace, set: &[usize], eps: f64) -> Result<f64> {
    caratheodory_outer_with(space, set, eps, CoverClass::UpTo)
}

/// `inf Σ μ(C_i)` over covers of `set` by balls of the given class, solved
/// exactly by branch and bound. Costs of the optimal cover are summed exactly.
pub fn caratheodory_outer_with(space: &FiniteMetricMeasureSpace, set: &[usize], eps: f64, class: CoverClass) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::input(format!("scale must be positive, got {eps}")));
    }
    let target = mask_of(set, space.len())?;
    if target == 0 {
        return Ok(0.0);
    }
    let cands = candidates(space, target, eps, class);
    let mut search = Search {
        cands: &cands,
        best_cost: f64::INFINITY,
        best_exact: None,
        stack: Vec::new(),
    };
    search.run(target, 0.0);
    Ok(search.best_exact.expect("singleton balls always cover").to_f64().expect("representable mass"))
}

/// `sup` over the family of [`caratheodory_outer`].
pub fn mu_star(space: &FiniteMetricMeasureSpace, set: &[usize], radii: &RadiusFamily) -> Result<f64> {
    mu_star_with(space, set, radii, CoverClass::UpTo)
}

pub fn mu_star_with(space: &FiniteMetricMeasureSpace, set: &[usize], radii: &RadiusFamily, class: CoverClass) -> Result<f64> {
    let mut best = 0.0f64;
    for &eps in radii.radii() {
        best = best.max(caratheodory_outer_with(space, set, eps, class)?);
    }
    Ok(best)
}
