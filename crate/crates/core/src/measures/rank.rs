use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::RadiusFamily;
use crate::metric::FiniteMetricMeasureSpace;

/// Outcome of the determined-by-balls check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Determinacy {
    pub determined: bool,
    /// Rank over Q of the ball incidence matrix.
    pub rank: usize,
    pub num_points: usize,
    pub num_balls: usize,
    /// Integer null vector of the ball incidence matrix, scaled to coprime
    /// entries with the first nonzero entry positive.
    #[serde(serialize_with = "ser_bigints", skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<BigInt>>,
    /// Whether the witness has total sum zero, so that `μ ± t·w` stay
    /// probability vectors.
    pub witness_sums_to_zero: bool,
    /// Largest `t` with `μ ± t·w ≥ 0` entrywise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_perturbation: Option<f64>,
}

fn ser_bigints<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Option<Vec<String>> = v.as_ref().map(|w| w.iter().map(|x| x.to_string()).collect());
    strings.serialize(s)
}

impl Determinacy {
    pub fn witness_f64(&self) -> Option<Vec<f64>> {
        self.witness
            .as_ref()
            .map(|w| w.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
    }
}

/// Member sets of every distinct closed ball with any center and a radius
/// from the family, sorted.
pub fn allowed_balls(space: &FiniteMetricMeasureSpace, radii: &RadiusFamily) -> Vec<Vec<usize>> {
    let n = space.len();
    let dm = space.dist();
    let mut balls: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        for &r in radii.radii() {
            balls.push((0..n).filter(|&j| dm.get(x, j) <= r).collect());
        }
    }
    balls.sort();
    balls.dedup();
    balls
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut Vec<Vec<BigRational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// A nonzero rational null vector, if the kernel is nontrivial.
fn null_vector(mut rows: Vec<Vec<BigRational>>, cols: usize) -> (usize, Option<Vec<BigRational>>) {
    let pivots = rref(&mut rows, cols);
    let rank = pivots.len();
    let Some(free) = (0..cols).find(|c| !pivots.contains(c)) else {
        return (rank, None);
    };
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[r][free].clone();
    }
    (rank, Some(v))
}

fn to_primitive_integers(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x /= &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -x.clone();
        }
    }
    ints
}

/// Whether the measure of `space` is pinned down by its values on the
/// allowed balls among all signed measures, via the rank over Q of the ball
/// incidence matrix. On rank deficiency a witness direction is returned;
/// when possible it also sums to zero, so `μ ± t·w` are two probability
/// measures agreeing on every allowed ball.
pub fn determined_by_balls(space: &FiniteMetricMeasureSpace, radii: &RadiusFamily) -> Determinacy {
    let n = space.len();
    let balls = allowed_balls(space, radii);
    let incidence: Vec<Vec<BigRational>> = balls
        .iter()
        .map(|b| {
            let mut row = vec![BigRational::zero(); n];
            for &j in b {
                row[j] = BigRational::one();
            }
            row
        })
        .collect();
    let (rank, plain) = null_vector(incidence.clone(), n);
    let mut out = Determinacy {
        determined: rank == n,
        rank,
        num_points: n,
        num_balls: balls.len(),
        witness: None,
        witness_sums_to_zero: false,
        max_perturbation: None,
    };
    let Some(plain) = plain else {
        return out;
    };
    let mut augmented = incidence;
    augmented.push(vec![BigRational::one(); n]);
    let (_, balanced) = null_vector(augmented, n);
    out.witness_sums_to_zero = balanced.is_some();
    let w = to_primitive_integers(&balanced.unwrap_or(plain));
    out.max_perturbation = space
        .weights()
        .iter()
        .zip(&w)
        .filter(|(_, x)| !x.is_zero())
        .map(|(m, x)| m / x.abs().to_f64().unwrap_or(f64::INFINITY))
        .reduce(f64::min);
    out.witness = Some(w);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DistanceMatrix;

    #[test]
    fn two_points_radius_one() {
        let s = FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_line(&[0.0, 1.0]).unwrap());
        let d = determined_by_balls(&s, &RadiusFamily::new(vec![1.0]).unwrap());
        assert!(!d.determined);
        assert_eq!(d.rank, 1);
        assert_eq!(d.witness, Some(vec![BigInt::from(1), BigInt::from(-1)]));
        assert!(d.witness_sums_to_zero);
        assert_eq!(d.max_perturbation, Some(0.5));
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains(r#""witness":["1","-1"]"#), "{json}");
    }

    #[test]
    fn all_radii_determines() {
        let s = FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_line(&[0.0, 1.0, 3.0, 4.5]).unwrap());
        let d = determined_by_balls(&s, &RadiusFamily::all(&s));
        assert!(d.determined);
        assert_eq!(d.rank, 4);
        assert!(d.witness.is_none());
    }

    #[test]
    fn four_cycle_radius_one() {
        // Balls {i-1, i, i+1} on C4 form the circulant with first row
        // (1,1,0,1), eigenvalues 1 + 2cos(πk/2) = 3, 1, -1, 1: full rank.
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|i: i32| (0..4).map(|j: i32| ((i - j).rem_euclid(4)).min((j - i).rem_euclid(4)) as f64).collect())
            .collect();
        let s = FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_rows(&rows).unwrap());
        let d = determined_by_balls(&s, &RadiusFamily::new(vec![1.0]).unwrap());
        assert!(d.determined);
        assert_eq!((d.rank, d.num_balls), (4, 4));
    }

    #[test]
    fn six_cycle_radius_one() {
        // Circulant (1,1,0,0,0,1) on C6 has eigenvalue 1 + 2cos(2πk/6) = 0 at k = 2, 4.
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i: i32| (0..6).map(|j: i32| ((i - j).rem_euclid(6)).min((j - i).rem_euclid(6)) as f64).collect())
            .collect();
        let s = FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_rows(&rows).unwrap());
        let radii = RadiusFamily::new(vec![1.0]).unwrap();
        let d = determined_by_balls(&s, &radii);
        assert!(!d.determined);
        assert_eq!(d.rank, 4);
        assert!(d.witness_sums_to_zero);
        let w = d.witness.unwrap();
        for b in allowed_balls(&s, &radii) {
            let sum: BigInt = b.iter().map(|&i| w[i].clone()).sum();
            assert!(sum.is_zero());
        }
        assert!(w.iter().sum::<BigInt>().is_zero());
    }

    #[test]
    fn duplicate_balls_counted_once() {
        // Radius 1 on the line 0, 1, 5 yields {0,1} from two centers and {2}.
        let s = FiniteMetricMeasureSpace::uniform(DistanceMatrix::from_line(&[0.0, 1.0, 5.0]).unwrap());
        let d = determined_by_balls(&s, &RadiusFamily::new(vec![1.0]).unwrap());
        assert_eq!(d.num_balls, 2);
        assert_eq!(d.rank, 2);
        assert!(d.witness_sums_to_zero);
        assert_eq!(d.witness, Some(vec![BigInt::from(1), BigInt::from(-1), BigInt::from(0)]));
    }
}
