use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multiset of `(birth, death)` pairs inside `[0, α]²` with at most `N`
/// points: an element of the bounded diagram space.
///
/// Pairs are kept sorted by `(birth, death)` so equality is multiset equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    alpha: f64,
    #[serde(rename = "N")]
    cap: usize,
    pairs: Vec<(f64, f64)>,
    #[serde(default)]
    overflow: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

fn cmp_pairs(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

fn check_box(alpha: f64, cap: usize) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::input(format!("alpha must be positive and finite, got {alpha}")));
    }
    if cap == 0 {
        return Err(Error::input("point cap N must be at least 1"));
    }
    Ok(())
}

impl PersistenceDiagram {
    /// Strict constructor: every pair must already lie in the box with
    /// `birth < death`, and there may be at most `cap` of them.
    pub fn new(mut pairs: Vec<(f64, f64)>, alpha: f64, cap: usize) -> Result<Self> {
        check_box(alpha, cap)?;
        if pairs.len() > cap {
            return Err(Error::input(format!("{} pairs exceed the cap N = {cap}", pairs.len())));
        }
        for &(b, d) in &pairs {
            if !(0.0 <= b && b < d && d <= alpha) {
                return Err(Error::input(format!("pair ({b}, {d}) is not inside [0, {alpha}]² with birth < death")));
            }
        }
        pairs.sort_by(cmp_pairs);
        Ok(PersistenceDiagram {
            alpha,
            cap,
            pairs,
            overflow: false,
            warning: None,
        })
    }

    pub fn empty(alpha: f64, cap: usize) -> Result<Self> {
        Self::new(Vec::new(), alpha, cap)
    }

    /// Total constructor used by the pipelines: deaths are truncated to
    /// `alpha`, zero-length pairs are dropped, and when more than `cap` pairs
    /// survive only the `cap` most persistent are kept and `overflow` is set.
    pub fn capped(raw: impl IntoIterator<Item = (f64, f64)>, alpha: f64, cap: usize) -> Result<Self> {
        check_box(alpha, cap)?;
        let mut pairs: Vec<(f64, f64)> = raw
            .into_iter()
            .map(|(b, d)| (b.max(0.0), d.min(alpha)))
            .filter(|(b, d)| b < d)
            .collect();
        let overflow = pairs.len() > cap;
        if overflow {
            pairs.sort_by(|a, b| (b.1 - b.0).total_cmp(&(a.1 - a.0)).then(cmp_pairs(a, b)));
            pairs.truncate(cap);
        }
        pairs.sort_by(cmp_pairs);
        Ok(PersistenceDiagram {
            alpha,
            cap,
            pairs,
            overflow,
            warning: None,
        })
    }

    /// Re-check invariants after deserialization.
    pub fn validated(self) -> Result<Self> {
        let overflow = self.overflow;
        let warning = self.warning.clone();
        let mut d = Self::new(self.pairs, self.alpha, self.cap)?;
        d.overflow = overflow;
        d.warning = warning;
        Ok(d)
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warning = Some(warning.into());
        self
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn overflow(&self) -> bool {
        self.overflow
    }

    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of pairs alive at `s`, i.e. with `birth ≤ s < death`.
    pub fn rank_at(&self, s: f64) -> usize {
        self.pairs.iter().filter(|&&(b, d)| b <= s && s < d).count()
    }

    /// Persistence values `death − birth`, descending.
    pub fn persistences(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.pairs.iter().map(|(b, d)| d - b).collect();
        p.sort_by(|a, b| b.total_cmp(a));
        p
    }

    /// Total order used to canonicalize samples of diagrams.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.pairs.iter().zip(&other.pairs) {
            match cmp_pairs(a, b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.pairs.len().cmp(&other.pairs.len())
    }
}
