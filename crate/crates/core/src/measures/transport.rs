use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{check_probability, FiniteMetricMeasureSpace};

/// Tolerance for coupling marginals.
pub const MARGINAL_TOL: f64 = 1e-9;
const CAP_EPS: f64 = 1e-15;

/// A coupling `π` of two weight vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportPlan {
    pi: Vec<Vec<f64>>,
}

impl TransportPlan {
    pub fn new(pi: Vec<Vec<f64>>, mu: &[f64], nu: &[f64]) -> Result<Self> {
        if pi.len() != mu.len() || pi.iter().any(|r| r.len() != nu.len()) {
            return Err(Error::input(format!("plan must be {}x{}", mu.len(), nu.len())));
        }
        if pi.iter().flatten().any(|&x| !(x >= 0.0)) {
            return Err(Error::input("plan entries must be nonnegative"));
        }
        for (i, row) in pi.iter().enumerate() {
            let s: f64 = row.iter().sum();
            if (s - mu[i]).abs() > MARGINAL_TOL {
                return Err(Error::input(format!("row {i} sums to {s}, expected {}", mu[i])));
            }
        }
        for (j, &target) in nu.iter().enumerate() {
            let s: f64 = pi.iter().map(|r| r[j]).sum();
            if (s - target).abs() > MARGINAL_TOL {
                return Err(Error::input(format!("column {j} sums to {s}, expected {target}")));
            }
        }
        Ok(TransportPlan { pi })
    }

    pub fn pi(&self) -> &[Vec<f64>] {
        &self.pi
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pi[i][j]
    }

    pub fn cost(&self, cost: impl Fn(usize, usize) -> f64) -> f64 {
        self.pi
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &p)| (i, j, p)))
            .filter(|&(_, _, p)| p > 0.0)
            .map(|(i, j, p)| p * cost(i, j))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transport {
    pub cost: f64,
    pub plan: TransportPlan,
}

struct Edge {
    to: usize,
    cap: f64,
    cost: f64,
}

/// Min-cost flow network with paired residual edges (`e ^ 1` is the reverse of `e`).
struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: f64, cost: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, cost });
        self.edges.push(Edge { to: from, cap: 0.0, cost: -cost });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Cheapest residual path by Bellman–Ford; returns the edge ids from source to sink.
    fn shortest_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut via = vec![usize::MAX; n];
        dist[s] = 0.0;
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                if dist[u].is_infinite() {
                    continue;
                }
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap > CAP_EPS && dist[u] + edge.cost < dist[edge.to] - 1e-12 {
                        dist[edge.to] = dist[u] + edge.cost;
                        via[edge.to] = e;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[t].is_infinite() {
            return None;
        }
        let mut path = Vec::new();
        let mut v = t;
        while v != s {
            let e = via[v];
            path.push(e);
            v = self.edges[e ^ 1].to;
        }
        path.reverse();
        Some(path)
    }
}

/// Optimal coupling of `mu` (rows) and `nu` (columns) under an arbitrary
/// nonnegative cost matrix, by successive shortest augmenting paths.
pub fn transport(cost: &[Vec<f64>], mu: &[f64], nu: &[f64]) -> Result<Transport> {
    let (m, n) = (mu.len(), nu.len());
    if cost.len() != m || cost.iter().any(|r| r.len() != n) {
        return Err(Error::input(format!("cost matrix must be {m}x{n}")));
    }
    if cost.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::input("costs must be finite"));
    }
    let (s, t) = (0, m + n + 1);
    let mut net = Network::new(m + n + 2);
    for (i, &w) in mu.iter().enumerate() {
        net.add(s, 1 + i, w, 0.0);
    }
    for (j, &w) in nu.iter().enumerate() {
        net.add(1 + m + j, t, w, 0.0);
    }
    let mut cell = vec![vec![0usize; n]; m];
    for i in 0..m {
        for j in 0..n {
            cell[i][j] = net.add(1 + i, 1 + m + j, f64::INFINITY, cost[i][j]);
        }
    }
    while let Some(path) = net.shortest_path(s, t) {
        let push = path.iter().map(|&e| net.edges[e].cap).fold(f64::INFINITY, f64::min);
        for &e in &path {
            net.edges[e].cap -= push;
            net.edges[e ^ 1].cap += push;
        }
    }
    let pi: Vec<Vec<f64>> = cell
        .iter()
        .map(|row| row.iter().map(|&e| net.edges[e ^ 1].cap.max(0.0)).collect())
        .collect();
    let plan = TransportPlan::new(pi, mu, nu)?;
    let total = plan.cost(|i, j| cost[i][j]);
    Ok(Transport { cost: total, plan })
}

/// 1-Wasserstein distance between two probability vectors on the points of `space`.
pub fn wasserstein(space: &FiniteMetricMeasureSpace, mu: &[f64], nu: &[f64]) -> Result<Transport> {
    let n = space.len();
    check_probability(mu, n)?;
    check_probability(nu, n)?;
    let cost: Vec<Vec<f64>> = (0..n).map(|i| space.dist().row(i).to_vec()).collect();
    transport(&cost, mu, nu)
}
