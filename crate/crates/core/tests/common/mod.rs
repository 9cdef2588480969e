//! Brute-force reference implementations and random instance generators for
//! the integration tests. Nothing here calls into the metric or percolation
//! code it is compared against.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use fuzznet::fuzzy::{FuzzyEdgeRelation, FuzzyGraph, FuzzyVertexSet, MembershipDegree};
use fuzznet::{CrispDigraph, UndirectedGraph, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

/// Adjacency-matrix view used by the oracles.
pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Dense { n, adj }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.adj[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Vertex `i` gets id `v{i}` so that id order equals index order for n ≤ 10.
    pub fn to_graph(&self) -> UndirectedGraph {
        let ids: Vec<VertexId> = (0..self.n).map(|i| VertexId::new(format!("v{i}"))).collect();
        UndirectedGraph::from_edges(
            ids.iter().cloned(),
            self.edge_list().into_iter().map(|(a, b)| (ids[a].clone(), ids[b].clone())),
        )
        .unwrap()
    }
}

/// All-pairs distances by Floyd–Warshall; `None` when unreachable.
pub fn floyd_warshall(g: &Dense) -> Vec<Vec<Option<u32>>> {
    let n = g.n;
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if g.adj[i][j] {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Mean distance over reachable unordered pairs, and the pair count.
pub fn oracle_apl(g: &Dense) -> (f64, usize) {
    let d = floyd_warshall(g);
    let mut sum = 0u64;
    let mut pairs = 0usize;
    for i in 0..g.n {
        for j in i + 1..g.n {
            if let Some(x) = d[i][j] {
                sum += u64::from(x);
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        (0.0, 0)
    } else {
        (sum as f64 / pairs as f64, pairs)
    }
}

/// Eccentricities (0 for isolated vertices), radius and diameter.
pub fn oracle_eccentricity(g: &Dense) -> (Vec<u32>, u32, u32) {
    let d = floyd_warshall(g);
    let ecc: Vec<u32> = (0..g.n)
        .map(|i| (0..g.n).filter_map(|j| d[i][j]).max().unwrap_or(0))
        .collect();
    let radius = *ecc.iter().min().unwrap();
    let diameter = *ecc.iter().max().unwrap();
    (ecc, radius, diameter)
}

/// P / Q by checking every neighbour pair.
pub fn oracle_clustering(g: &Dense, v: usize) -> f64 {
    let nbrs: Vec<usize> = (0..g.n).filter(|&u| g.adj[v][u]).collect();
    let d = nbrs.len();
    if d < 2 {
        return 0.0;
    }
    let mut p = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if g.adj[a][b] {
                p += 1;
            }
        }
    }
    p as f64 / (d * (d - 1) / 2) as f64
}

/// Textbook Pearson correlation over the list of (deg u, deg v) for both
/// orientations of every edge. `None` means zero variance or no edges.
pub fn oracle_assortativity(g: &Dense) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (a, b) in g.edge_list() {
        let (da, db) = (g.degree(a) as f64, g.degree(b) as f64);
        xs.push(da);
        ys.push(db);
        xs.push(db);
        ys.push(da);
    }
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if vx < 1e-12 || vy < 1e-12 {
        return None;
    }
    Some(cov / (vx.sqrt() * vy.sqrt()))
}

/// Every labelled simple graph on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Dense> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            Dense::new(n, &edges)
        })
        .collect()
}

pub fn random_dense<R: Rng>(rng: &mut R, max_n: usize) -> Dense {
    let n = rng.gen_range(1..=max_n);
    let density: f64 = rng.gen();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    Dense::new(n, &edges)
}

/// Random degree with at most six decimals in `[0, max]`.
pub fn random_degree<R: Rng>(rng: &mut R, max: MembershipDegree) -> MembershipDegree {
    let micro = (max.value() * 1e6).round() as u64;
    let pick = rng.gen_range(0..=micro);
    let text = format!("{}.{:06}", pick / 1_000_000, pick % 1_000_000);
    let d: MembershipDegree = text.parse().unwrap();
    if d > max {
        max
    } else {
        d
    }
}

/// Valid random fuzzy graph on up to `max_n` vertices.
pub fn random_fuzzy<R: Rng>(rng: &mut R, max_n: usize) -> FuzzyGraph {
    let n = rng.gen_range(1..=max_n);
    let ids: Vec<VertexId> = (0..n).map(|i| VertexId::new(format!("n{i:02}"))).collect();
    let sigma: FuzzyVertexSet = ids
        .iter()
        .map(|id| {
            let d = if rng.gen_bool(0.2) {
                MembershipDegree::ONE
            } else {
                random_degree(rng, MembershipDegree::ONE)
            };
            (id.clone(), d)
        })
        .collect();
    let mut mu = FuzzyEdgeRelation::new();
    let density: f64 = rng.gen();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                let bound = sigma.degree(&ids[a]).min(sigma.degree(&ids[b]));
                let d = if rng.gen_bool(0.3) { bound } else { random_degree(rng, bound) };
                mu.insert(ids[a].clone(), ids[b].clone(), d).unwrap();
            }
        }
    }
    FuzzyGraph::new(sigma, mu)
}

/// Random ν with ν ≤ σ pointwise, over a random subset of the vertices.
pub fn random_subset_sigma<R: Rng>(rng: &mut R, sigma: &FuzzyVertexSet) -> FuzzyVertexSet {
    let mut nu = FuzzyVertexSet::new();
    for (v, d) in sigma.iter() {
        if rng.gen_bool(0.8) {
            let degree = if rng.gen_bool(0.3) { d } else { random_degree(rng, d) };
            nu.insert(v.clone(), degree);
        }
    }
    nu
}

/// Random digraph without self-arcs over ids drawn from a small alphabet;
/// vertices appear only as arc endpoints.
pub fn random_digraph<R: Rng>(rng: &mut R, max_n: usize, max_arcs: usize) -> CrispDigraph {
    let n = rng.gen_range(2..=max_n);
    let ids: Vec<VertexId> = (0..n).map(|i| VertexId::new(format!("host-{i}"))).collect();
    let mut arcs = BTreeSet::new();
    let target = rng.gen_range(0..=max_arcs);
    for _ in 0..target {
        let s = ids.choose(rng).unwrap();
        let d = ids.choose(rng).unwrap();
        if s != d {
            arcs.insert((s.clone(), d.clone()));
        }
    }
    CrispDigraph::from_arcs(arcs).unwrap()
}

/// Remove `removed` from `g` using plain set operations on ids.
pub fn remove_by_sets(g: &UndirectedGraph, removed: &[VertexId]) -> (BTreeSet<VertexId>, BTreeSet<(VertexId, VertexId)>) {
    let gone: BTreeSet<&VertexId> = removed.iter().collect();
    let vertices = g.ids().iter().filter(|v| !gone.contains(v)).cloned().collect();
    let edges = g
        .edges()
        .filter(|(a, b)| !gone.contains(a) && !gone.contains(b))
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    (vertices, edges)
}

/// BFS reachability over the undirected projection, independent of the
/// component code under test.
pub fn weakly_connected(g: &CrispDigraph) -> bool {
    let Some(start) = g.vertices().iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start.clone()];
    while let Some(x) = frontier.pop() {
        for (s, d) in g.arcs() {
            let other = if *s == x {
                d
            } else if *d == x {
                s
            } else {
                continue;
            };
            if seen.insert(other.clone()) {
                frontier.push(other.clone());
            }
        }
    }
    seen.len() == g.vertex_count()
}
