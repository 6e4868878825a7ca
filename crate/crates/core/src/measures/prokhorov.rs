use crate::error::{Error, Result};
use crate::metric::{check_probability, FiniteMetricMeasureSpace};

pub const PROKHOROV_MAX_POINTS: usize = 16;

/// Lévy–Prokhorov distance between two probability vectors on `space`,
/// with closed thickenings `A^ε = {x : d(x, A) ≤ ε}`.
///
/// For ε in `[d_k, d_{k+1})` between consecutive distinct distances the
/// thickening of every set is constant, so the defining inequalities hold
/// iff `ε ≥ c_k := max_A max(μ(A) − ν(A^{d_k}), ν(A) − μ(A^{d_k}))`. The
/// distance is therefore `min_k max(d_k, c_k)`, evaluated by enumerating all
/// subsets.
pub fn prokhorov(space: &FiniteMetricMeasureSpace, mu: &[f64], nu: &[f64]) -> Result<f64> {
    let n = space.len();
    check_probability(mu, n)?;
    check_probability(nu, n)?;
    if n > PROKHOROV_MAX_POINTS {
        return Err(Error::Capability(format!(
            "exhaustive Prokhorov supports at most {PROKHOROV_MAX_POINTS} points, got {n}"
        )));
    }
    let full = 1usize << n;
    let mut mass_mu = vec![0.0; full];
    let mut mass_nu = vec![0.0; full];
    for a in 1..full {
        let low = a.trailing_zeros() as usize;
        mass_mu[a] = mass_mu[a & (a - 1)] + mu[low];
        mass_nu[a] = mass_nu[a & (a - 1)] + nu[low];
    }
    let dm = space.dist();
    let mut best = f64::INFINITY;
    let mut thick = vec![0usize; full];
    let mut scales = vec![0.0];
    scales.extend(dm.distinct_values().into_iter().filter(|&d| d > 0.0));
    for d in scales {
        if d >= best {
            break;
        }
        let nbr: Vec<usize> = (0..n)
            .map(|i| (0..n).filter(|&j| dm.get(i, j) <= d).fold(0, |m, j| m | 1 << j))
            .collect();
        let mut c = 0.0f64;
        for a in 1..full {
            let low = a.trailing_zeros() as usize;
            thick[a] = thick[a & (a - 1)] | nbr[low];
            c = c
                .max(mass_mu[a] - mass_nu[thick[a]])
                .max(mass_nu[a] - mass_mu[thick[a]]);
        }
        best = best.min(d.max(c));
    }
    Ok(best.max(0.0))
}
