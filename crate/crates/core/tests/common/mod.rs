//! Independent oracles shared by the integration tests. Nothing here calls
//! into the crate's solvers; only plain data types cross the boundary.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn distance_rows(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points.iter().map(|p| points.iter().map(|q| euclid(p, q)).collect()).collect()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.random::<f64>() * scale).collect()).collect()
}

/// Random probability vector with some exact zeros.
pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| if rng.random::<f64>() < 0.2 { 0.0 } else { rng.random::<f64>() }).collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

// ------------------------------------------------------------ GF(2) ranks

/// Rank over GF(2) of a list of 0/1 rows.
pub fn gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All subsets of `vertices` of size `d + 1` with pairwise distances ≤ scale.
pub fn vr_simplices(dist: &[Vec<f64>], vertices: &[usize], scale: f64, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(dist: &[Vec<f64>], vs: &[usize], start: usize, size: usize, scale: f64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..vs.len() {
            let v = vs[i];
            if cur.iter().all(|&u| dist[u][v] <= scale) {
                cur.push(v);
                rec(dist, vs, i + 1, size, scale, cur, out);
                cur.pop();
            }
        }
    }
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    rec(dist, &vs, 0, d + 1, scale, &mut cur, &mut out);
    out
}

/// Rank of ∂_d : C_d → C_{d−1}.
fn boundary_rank(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> usize {
    if lower.is_empty() || upper.is_empty() {
        return 0;
    }
    let rows = upper
        .iter()
        .map(|s| {
            let mut row = vec![false; lower.len()];
            for skip in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let idx = lower.iter().position(|f| *f == face).expect("face present");
                row[idx] = true;
            }
            row
        })
        .collect();
    gf2_rank(rows)
}

/// β_k of the Vietoris–Rips complex on `vertices` at `scale` by rank–nullity.
pub fn betti(dist: &[Vec<f64>], vertices: &[usize], scale: f64, k: usize) -> usize {
    let ck = vr_simplices(dist, vertices, scale, k);
    let ck1 = vr_simplices(dist, vertices, scale, k + 1);
    let rank_k = if k == 0 { 0 } else { boundary_rank(&vr_simplices(dist, vertices, scale, k - 1), &ck) };
    let rank_k1 = boundary_rank(&ck, &ck1);
    ck.len() - rank_k - rank_k1
}

// ------------------------------------------------------------ matchings

fn linf(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

/// Bottleneck distance by enumerating every partial injection from `a` to `b`.
pub fn brute_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    fn rec(a: &[(f64, f64)], b: &[(f64, f64)], i: usize, used: &mut Vec<bool>, cur: f64, best: &mut f64) {
        if i == a.len() {
            let rest = b
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(q, _)| 0.5 * (q.1 - q.0))
                .fold(cur, f64::max);
            *best = best.min(rest);
            return;
        }
        rec(a, b, i + 1, used, cur.max(0.5 * (a[i].1 - a[i].0)), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                rec(a, b, i + 1, used, cur.max(linf(a[i], b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(a, b, 0, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

/// Random diagram with up to `max_points` pairs in `[0, alpha]²`.
pub fn random_pairs(rng: &mut ChaCha8Rng, max_points: usize, alpha: f64) -> Vec<(f64, f64)> {
    let n = rng.random_range(0..=max_points);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (u, v) = (rng.random::<f64>() * alpha, rng.random::<f64>() * alpha);
        if u != v {
            out.push((u.min(v), u.max(v)));
        }
    }
    out
}

// ------------------------------------------------------------ measures

/// Minimum-cost cover of `target` by the given weighted sets, by dynamic
/// programming over subsets of the target.
pub fn set_cover_dp(target: &[usize], sets: &[(Vec<usize>, f64)]) -> f64 {
    let t = target.len();
    let full = (1usize << t) - 1;
    let masks: Vec<(usize, f64)> = sets
        .iter()
        .map(|(s, c)| {
            let m = target.iter().enumerate().filter(|(_, x)| s.contains(x)).fold(0, |m, (i, _)| m | 1 << i);
            (m, *c)
        })
        .collect();
    let mut best = vec![f64::INFINITY; full + 1];
    best[0] = 0.0;
    for covered in 0..=full {
        if best[covered].is_infinite() {
            continue;
        }
        for &(m, c) in &masks {
            let next = covered | m;
            if next != covered && best[covered] + c < best[next] {
                best[next] = best[covered] + c;
            }
        }
    }
    best[full]
}

/// Optimal transport cost between two uniform-grain measures: every weight
/// is a multiple of `1/k`, so the problem is an assignment between `k`
/// unit atoms on each side, solved by enumerating all permutations.
pub fn brute_transport_units(dist: &[Vec<f64>], mu_units: &[usize], nu_units: &[usize]) -> f64 {
    let expand = |u: &[usize]| u.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect::<Vec<usize>>();
    let (a, b) = (expand(mu_units), expand(nu_units));
    let k = a.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = f64::INFINITY;
    fn heap(n: usize, perm: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if n <= 1 {
            f(perm);
            return;
        }
        for i in 0..n {
            heap(n - 1, perm, f);
            let j = if n % 2 == 0 { i } else { 0 };
            perm.swap(j, n - 1);
        }
    }
    heap(k, &mut perm, &mut |p| {
        let c: f64 = (0..k).map(|i| dist[a[i]][b[p[i]]]).sum();
        best = best.min(c);
    });
    best / k as f64
}

/// Lévy–Prokhorov distance by scanning a fine grid of ε with the subset
/// definition, then refining by bisection between grid points. Only for
/// tiny spaces.
pub fn brute_prokhorov(dist: &[Vec<f64>], mu: &[f64], nu: &[f64]) -> f64 {
    let n = mu.len();
    let ok = |eps: f64| {
        (1usize..1 << n).all(|a| {
            let mut thick = 0usize;
            for i in 0..n {
                if a >> i & 1 == 1 {
                    for j in 0..n {
                        if dist[i][j] <= eps {
                            thick |= 1 << j;
                        }
                    }
                }
            }
            let m = |w: &[f64], s: usize| (0..n).filter(|i| s >> i & 1 == 1).map(|i| w[i]).sum::<f64>();
            m(mu, a) <= m(nu, thick) + eps + 1e-12 && m(nu, a) <= m(mu, thick) + eps + 1e-12
        })
    };
    // The feasible set is an up-ray [d_P, ∞); find its left end.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if ok(0.0) {
        return 0.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
