//! Integer transportation problems by successive shortest paths.
//!
//! The solver works on `i128` supplies, demands and nonnegative costs. After
//! solving, an independent Bellman-Ford pass over the residual network
//! produces dual potentials; the solution is accepted only if the potentials
//! are dual feasible and the dual objective equals the primal cost.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Optimal integral transport plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPlan {
    pub cost: i128,
    /// `(supply index, demand index, amount)` with amount > 0.
    pub flows: Vec<(usize, usize, i128)>,
    /// Dual potentials certifying optimality: `v[j] - u[i] <= cost[i][j]`.
    pub u: Vec<i128>,
    pub v: Vec<i128>,
}

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i128,
    cost: i128,
    rev: usize,
}

struct Graph {
    adj: Vec<Vec<Edge>>,
}

impl Graph {
    fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i128, cost: i128) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Edge {
            to,
            cap,
            cost,
            rev: rev_from,
        });
        self.adj[to].push(Edge {
            to: from,
            cap: 0,
            cost: -cost,
            rev: rev_to,
        });
    }
}

/// Solves `min sum c[i][j] f[i][j]` subject to row sums `supply` and column
/// sums `demand`. `cost` is row-major `supply.len() x demand.len()`.
pub fn solve_transport(supply: &[i128], demand: &[i128], cost: &[i128]) -> Result<IntegerPlan> {
    let (ns, nd) = (supply.len(), demand.len());
    if cost.len() != ns * nd {
        return Err(Error::Mismatch(format!(
            "cost table has {} entries for a {ns} x {nd} problem",
            cost.len()
        )));
    }
    if supply.iter().chain(demand).any(|&v| v < 0) {
        return Err(Error::InvalidSpec("negative supply or demand".into()));
    }
    if cost.iter().any(|&c| c < 0) {
        return Err(Error::InvalidSpec("negative transport cost".into()));
    }
    let total: i128 = supply.iter().sum();
    if total != demand.iter().sum::<i128>() {
        return Err(Error::Mismatch("supply and demand totals differ".into()));
    }

    // Only nodes carrying mass take part.
    let src_nodes: Vec<usize> = (0..ns).filter(|&i| supply[i] > 0).collect();
    let dst_nodes: Vec<usize> = (0..nd).filter(|&j| demand[j] > 0).collect();
    let (a, b) = (src_nodes.len(), dst_nodes.len());
    let source = 0;
    let sink = a + b + 1;
    let mut g = Graph::new(a + b + 2);
    for (k, &i) in src_nodes.iter().enumerate() {
        g.add_edge(source, 1 + k, supply[i], 0);
    }
    for (k, &i) in src_nodes.iter().enumerate() {
        for (l, &j) in dst_nodes.iter().enumerate() {
            g.add_edge(1 + k, 1 + a + l, total, cost[i * nd + j]);
        }
    }
    for (l, &j) in dst_nodes.iter().enumerate() {
        g.add_edge(1 + a + l, sink, demand[j], 0);
    }

    let n = g.adj.len();
    let mut potential = vec![0i128; n];
    let mut shipped = 0i128;
    while shipped < total {
        let mut dist: Vec<Option<i128>> = vec![None; n];
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(0);
        heap.push(Reverse((0i128, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            for (ei, e) in g.adj[u].iter().enumerate() {
                if e.cap <= 0 {
                    continue;
                }
                let reduced = e.cost + potential[u] - potential[e.to];
                debug_assert!(reduced >= 0, "negative reduced cost");
                let nd_ = d + reduced;
                if dist[e.to].is_none_or(|old| nd_ < old) {
                    dist[e.to] = Some(nd_);
                    prev[e.to] = Some((u, ei));
                    heap.push(Reverse((nd_, e.to)));
                }
            }
        }
        if dist[sink].is_none() {
            return Err(Error::Internal("transport network disconnected".into()));
        }
        for v in 0..n {
            if let Some(d) = dist[v] {
                potential[v] += d;
            }
        }
        let mut push = total - shipped;
        let mut v = sink;
        while let Some((u, ei)) = prev[v] {
            push = push.min(g.adj[u][ei].cap);
            v = u;
        }
        let mut v = sink;
        while let Some((u, ei)) = prev[v] {
            let rev = g.adj[u][ei].rev;
            g.adj[u][ei].cap -= push;
            g.adj[v][rev].cap += push;
            v = u;
        }
        shipped += push;
    }

    let mut flows = Vec::new();
    let mut primal = 0i128;
    for (k, &i) in src_nodes.iter().enumerate() {
        for e in &g.adj[1 + k] {
            if e.to > a && e.to <= a + b {
                let f = total - e.cap;
                if f > 0 {
                    let j = dst_nodes[e.to - 1 - a];
                    primal += f * cost[i * nd + j];
                    flows.push((i, j, f));
                }
            }
        }
    }
    flows.sort_unstable();
    let (u, v) = certify(supply, demand, cost, &flows, primal)?;
    Ok(IntegerPlan {
        cost: primal,
        flows,
        u,
        v,
    })
}

/// Recomputes dual potentials from scratch and checks optimality.
fn certify(
    supply: &[i128],
    demand: &[i128],
    cost: &[i128],
    flows: &[(usize, usize, i128)],
    primal: i128,
) -> Result<(Vec<i128>, Vec<i128>)> {
    let (ns, nd) = (supply.len(), demand.len());
    let mut row = vec![0i128; ns];
    let mut col = vec![0i128; nd];
    for &(i, j, f) in flows {
        row[i] += f;
        col[j] += f;
    }
    if row != supply || col != demand {
        return Err(Error::Internal(
            "transport plan violates its marginals".into(),
        ));
    }

    // Residual arcs between the two sides: forward i -> j at cost c, and
    // backward j -> i at cost -c where flow is positive. Shortest distances
    // from a virtual root exist iff no negative cycle, i.e. iff optimal.
    let mut du = vec![0i128; ns];
    let mut dv = vec![0i128; nd];
    let rounds = ns + nd + 1;
    let mut settled = false;
    for _ in 0..rounds {
        let mut changed = false;
        for i in 0..ns {
            for j in 0..nd {
                let cand = du[i] + cost[i * nd + j];
                if cand < dv[j] {
                    dv[j] = cand;
                    changed = true;
                }
            }
        }
        for &(i, j, _) in flows {
            let cand = dv[j] - cost[i * nd + j];
            if cand < du[i] {
                du[i] = cand;
                changed = true;
            }
        }
        if !changed {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(Error::Internal(
            "transport plan admits a negative cycle".into(),
        ));
    }
    let dual: i128 = (0..nd).map(|j| demand[j] * dv[j]).sum::<i128>()
        - (0..ns).map(|i| supply[i] * du[i]).sum::<i128>();
    if dual != primal {
        return Err(Error::Internal(format!(
            "duality gap: primal {primal}, dual {dual}"
        )));
    }
    Ok((du, dv))
}
