//! Network metrics over undirected crisp graphs.
//!
//! Conventions used throughout (also carried in [`Conventions`] so every
//! serialized report states them):
//!
//! * path lengths are averaged over reachable unordered pairs only; a graph
//!   with no reachable pair has average path length 0;
//! * the eccentricity of an isolated vertex is 0;
//! * vertices of degree below 2 have clustering coefficient 0 and are kept in
//!   the average;
//! * power laws are fitted by ordinary least squares on `(ln k, ln p_k)`.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{CrispDigraph, UndirectedGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("metric is undefined on a graph without vertices")]
    EmptyGraph,
    #[error("metric is undefined on a graph without edges")]
    NoEdges,
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("power-law fit needs at least 3 distinct degrees >= k_min, found {found}")]
    TooFewPoints { found: usize },
}

/// Fraction `p_k` of vertices having degree `k`, zero-frequency degrees
/// omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeDistribution {
    entries: BTreeMap<usize, f64>,
}

impl DegreeDistribution {
    /// Normalizes arbitrary non-negative weights per degree into a
    /// distribution. Zero weights are dropped.
    pub fn from_weights<I: IntoIterator<Item = (usize, f64)>>(weights: I) -> Self {
        let positive: Vec<(usize, f64)> = weights.into_iter().filter(|&(_, w)| w > 0.0).collect();
        let total: f64 = positive.iter().map(|&(_, w)| w).sum();
        DegreeDistribution {
            entries: positive.into_iter().map(|(k, w)| (k, w / total)).collect(),
        }
    }

    pub fn entries(&self) -> &BTreeMap<usize, f64> {
        &self.entries
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.entries.get(&k).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn degree_distribution(g: &UndirectedGraph) -> Result<DegreeDistribution, MetricsError> {
    if g.is_empty() {
        return Err(MetricsError::EmptyGraph);
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..g.vertex_count() {
        *counts.entry(g.degree(i)).or_default() += 1;
    }
    let n = g.vertex_count() as f64;
    Ok(DegreeDistribution {
        entries: counts.into_iter().map(|(k, c)| (k, c as f64 / n)).collect(),
    })
}

/// Least-squares line `ln p_k = intercept - alpha ln k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub k_min: usize,
    pub points: usize,
}

/// Fits over every degree `k >= max(k_min, 1)` present in `d`.
pub fn fit_power_law(d: &DegreeDistribution, k_min: usize) -> Result<PowerLawFit, MetricsError> {
    let points: Vec<(f64, f64)> = d
        .entries
        .iter()
        .filter(|&(&k, &p)| k >= k_min.max(1) && p > 0.0)
        .map(|(&k, &p)| ((k as f64).ln(), p.ln()))
        .collect();
    if points.len() < 3 {
        return Err(MetricsError::TooFewPoints {
            found: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(PowerLawFit {
        alpha: -slope,
        intercept,
        r_squared,
        k_min,
        points: points.len(),
    })
}

/// Shortest hop counts between reachable unordered pairs, keyed with the
/// smaller id first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistanceTable {
    entries: BTreeMap<(VertexId, VertexId), u32>,
}

impl DistanceTable {
    pub fn get(&self, a: &VertexId, b: &VertexId) -> Option<u32> {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        self.entries.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(VertexId, VertexId), u32)> + '_ {
        self.entries.iter().map(|(k, d)| (k, *d))
    }
}

const UNREACHED: u32 = u32::MAX;

/// Per-source BFS summary.
#[derive(Clone, Copy, Debug, Default)]
struct SourceSummary {
    distance_sum: u64,
    reached: u64,
    eccentricity: u32,
}

fn bfs(g: &UndirectedGraph, source: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) -> SourceSummary {
    dist.fill(UNREACHED);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let mut summary = SourceSummary::default();
    while let Some(x) = queue.pop_front() {
        let dx = dist[x];
        for &y in g.neighbors(x) {
            if dist[y] == UNREACHED {
                dist[y] = dx + 1;
                summary.distance_sum += u64::from(dx + 1);
                summary.reached += 1;
                summary.eccentricity = dx + 1;
                queue.push_back(y);
            }
        }
    }
    summary
}

fn source_summaries(g: &UndirectedGraph) -> Vec<SourceSummary> {
    let n = g.vertex_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![UNREACHED; n], VecDeque::new()),
            |(dist, queue), s| bfs(g, s, dist, queue),
        )
        .collect()
}

/// BFS from every vertex.
pub fn all_pairs_distances(g: &UndirectedGraph) -> DistanceTable {
    let n = g.vertex_count();
    let mut dist = vec![UNREACHED; n];
    let mut queue = VecDeque::new();
    let mut entries = BTreeMap::new();
    for s in 0..n {
        bfs(g, s, &mut dist, &mut queue);
        for (t, &d) in dist.iter().enumerate().skip(s + 1) {
            if d != UNREACHED {
                entries.insert((g.id(s).clone(), g.id(t).clone()), d);
            }
        }
    }
    DistanceTable { entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathLengthSummary {
    pub mean: f64,
    pub reachable_pairs: u64,
}

fn path_length_from(summaries: &[SourceSummary]) -> PathLengthSummary {
    // every unordered pair is seen from both ends
    let ordered_pairs: u64 = summaries.iter().map(|s| s.reached).sum();
    let total: u64 = summaries.iter().map(|s| s.distance_sum).sum();
    PathLengthSummary {
        mean: if ordered_pairs == 0 {
            0.0
        } else {
            total as f64 / ordered_pairs as f64
        },
        reachable_pairs: ordered_pairs / 2,
    }
}

/// Mean hop count over reachable unordered pairs.
pub fn average_path_length(g: &UndirectedGraph) -> PathLengthSummary {
    path_length_from(&source_summaries(g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EccentricityReport {
    pub eccentricities: BTreeMap<VertexId, u32>,
    pub radius: u32,
    pub diameter: u32,
}

fn eccentricity_from(g: &UndirectedGraph, summaries: &[SourceSummary]) -> EccentricityReport {
    let eccentricities: BTreeMap<VertexId, u32> = summaries
        .iter()
        .enumerate()
        .map(|(i, s)| (g.id(i).clone(), s.eccentricity))
        .collect();
    let radius = summaries.iter().map(|s| s.eccentricity).min().unwrap_or(0);
    let diameter = summaries.iter().map(|s| s.eccentricity).max().unwrap_or(0);
    EccentricityReport {
        eccentricities,
        radius,
        diameter,
    }
}

/// Eccentricity of every vertex over the vertices it can reach.
pub fn eccentricity_report(g: &UndirectedGraph) -> Result<EccentricityReport, MetricsError> {
    if g.is_empty() {
        return Err(MetricsError::EmptyGraph);
    }
    Ok(eccentricity_from(g, &source_summaries(g)))
}

fn clustering_at(g: &UndirectedGraph, v: usize, mark: &mut [bool]) -> f64 {
    let nbrs = g.neighbors(v);
    let d = nbrs.len();
    if d < 2 {
        return 0.0;
    }
    for &u in nbrs {
        mark[u] = true;
    }
    let mut links = 0usize;
    for &u in nbrs {
        links += g.neighbors(u).iter().filter(|&&w| mark[w]).count();
    }
    for &u in nbrs {
        mark[u] = false;
    }
    // each neighbour-neighbour edge counted from both ends
    let p = (links / 2) as f64;
    let q = (d * (d - 1) / 2) as f64;
    p / q
}

/// Local clustering `P / Q` of vertex `v`.
pub fn clustering_coefficient(g: &UndirectedGraph, v: &VertexId) -> Result<f64, MetricsError> {
    let i = g
        .index_of(v)
        .ok_or_else(|| MetricsError::UnknownVertex(v.clone()))?;
    let mut mark = vec![false; g.vertex_count()];
    Ok(clustering_at(g, i, &mut mark))
}

/// Local clustering of every vertex, by vertex index.
pub fn local_clustering(g: &UndirectedGraph) -> Vec<f64> {
    let mut mark = vec![false; g.vertex_count()];
    (0..g.vertex_count())
        .map(|i| clustering_at(g, i, &mut mark))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutdegreeClustering {
    pub vertex: VertexId,
    pub out_degree: usize,
    pub clustering: f64,
}

/// Out-degree in the digraph against clustering in its undirected
/// projection, one row per vertex in id order.
pub fn clustering_vs_outdegree(g: &CrispDigraph) -> Vec<OutdegreeClustering> {
    let u = g.undirected_projection();
    let clustering = local_clustering(&u);
    g.out_degrees()
        .into_iter()
        .zip(clustering)
        .map(|((v, out_degree), clustering)| OutdegreeClustering {
            vertex: v.clone(),
            out_degree,
            clustering,
        })
        .collect()
}

/// Degree assortativity: Pearson correlation of the endpoint degrees over
/// both orientations of every edge. `None` when the endpoint degrees have
/// zero variance.
///
/// With `M = 2|E|` orientations the sums reduce to vertex and edge sums:
/// `Σx = Σ_v d_v²`, `Σx² = Σ_v d_v³`, `Σxy = 2 Σ_{uv ∈ E} d_u d_v`. They are
/// accumulated exactly in integers, so the zero-variance test is exact.
pub fn assortativity(g: &UndirectedGraph) -> Result<Option<f64>, MetricsError> {
    if g.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let m = 2 * g.edge_count() as i128;
    let (mut sx, mut sxx) = (0i128, 0i128);
    for i in 0..g.vertex_count() {
        let d = g.degree(i) as i128;
        sx += d * d;
        sxx += d * d * d;
    }
    let sxy: i128 = g
        .edge_indices()
        .map(|(a, b)| 2 * g.degree(a) as i128 * g.degree(b) as i128)
        .sum();
    let variance = m * sxx - sx * sx;
    if variance == 0 {
        return Ok(None);
    }
    let covariance = m * sxy - sx * sx;
    Ok(Some((covariance as f64 / variance as f64).clamp(-1.0, 1.0)))
}

/// Convention labels attached to every serialized report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub apl: &'static str,
    pub isolated_eccentricity: &'static str,
    pub low_degree_clustering: &'static str,
    pub fit: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            apl: "mean over reachable unordered pairs; 0 when no pair is reachable",
            isolated_eccentricity: "0",
            low_degree_clustering: "vertices with degree < 2 count as 0 in the average",
            fit: "ordinary least squares of ln(p_k) on ln(k) for k >= k_min",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub average_path_length: f64,
    pub reachable_pairs: u64,
    pub radius: u32,
    pub diameter: u32,
    pub assortativity: Option<f64>,
    pub average_clustering: f64,
    pub conventions: Conventions,
}

pub fn metrics_report(g: &UndirectedGraph) -> Result<MetricsReport, MetricsError> {
    if g.is_empty() {
        return Err(MetricsError::EmptyGraph);
    }
    let summaries = source_summaries(g);
    let apl = path_length_from(&summaries);
    let ecc = eccentricity_from(g, &summaries);
    let assortativity = match assortativity(g) {
        Ok(r) => r,
        Err(MetricsError::NoEdges) => None,
        Err(e) => return Err(e),
    };
    let clustering = local_clustering(g);
    Ok(MetricsReport {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        average_degree: g.average_degree(),
        average_path_length: apl.mean,
        reachable_pairs: apl.reachable_pairs,
        radius: ecc.radius,
        diameter: ecc.diameter,
        assortativity,
        average_clustering: clustering.iter().sum::<f64>() / g.vertex_count() as f64,
        conventions: Conventions::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexId {
        VertexId::from(s)
    }

    fn graph(vertices: &[&str], edges: &[(&str, &str)]) -> UndirectedGraph {
        UndirectedGraph::from_edges(
            vertices.iter().map(|s| v(s)),
            edges.iter().map(|(a, b)| (v(a), v(b))),
        )
        .unwrap()
    }

    fn triangle() -> UndirectedGraph {
        graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")])
    }

    fn path3() -> UndirectedGraph {
        graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")])
    }

    fn star(leaves: usize) -> UndirectedGraph {
        let names: Vec<String> = (0..leaves).map(|i| format!("l{i}")).collect();
        let mut vs = vec!["hub"];
        vs.extend(names.iter().map(String::as_str));
        let es: Vec<(&str, &str)> = names.iter().map(|l| ("hub", l.as_str())).collect();
        graph(&vs, &es)
    }

    #[test]
    fn degree_distribution_cases() {
        let d = degree_distribution(&triangle()).unwrap();
        assert_eq!(d.entries(), &BTreeMap::from([(2, 1.0)]));
        let d = degree_distribution(&star(3)).unwrap();
        assert_eq!(d.entries(), &BTreeMap::from([(1, 0.75), (3, 0.25)]));
        let d = degree_distribution(&path3()).unwrap();
        assert_eq!(d.entries(), &BTreeMap::from([(1, 2.0 / 3.0), (2, 1.0 / 3.0)]));
        assert_eq!(
            degree_distribution(&UndirectedGraph::default()),
            Err(MetricsError::EmptyGraph)
        );
    }

    #[test]
    fn power_law_exact_exponents() {
        let d = DegreeDistribution::from_weights((1..=100).map(|k| (k, (k as f64).powi(-2))));
        let fit = fit_power_law(&d, 1).unwrap();
        assert!((fit.alpha - 2.0).abs() < 1e-9, "{fit:?}");
        assert!((fit.r_squared - 1.0).abs() < 1e-12);

        let d = DegreeDistribution::from_weights((2..=50).map(|k| (k, (k as f64).powi(-3))));
        let fit = fit_power_law(&d, 2).unwrap();
        assert!((fit.alpha - 3.0).abs() < 1e-9, "{fit:?}");
        assert_eq!(fit.points, 49);
    }

    #[test]
    fn power_law_needs_three_points() {
        let d = degree_distribution(&star(3)).unwrap();
        assert_eq!(fit_power_law(&d, 1), Err(MetricsError::TooFewPoints { found: 2 }));
        let d = DegreeDistribution::from_weights((1..=10).map(|k| (k, 1.0 / k as f64)));
        assert_eq!(fit_power_law(&d, 9), Err(MetricsError::TooFewPoints { found: 2 }));
    }

    #[test]
    fn power_law_skips_degree_zero() {
        let d = DegreeDistribution::from_weights([(0, 0.5), (1, 1.0), (2, 0.25), (4, 0.0625)]);
        let fit = fit_power_law(&d, 0).unwrap();
        assert_eq!(fit.points, 3);
        assert!((fit.alpha - 2.0).abs() < 1e-12);
    }

    #[test]
    fn distance_table_cases() {
        let t = all_pairs_distances(&triangle());
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|(_, d)| d == 1));

        let t = all_pairs_distances(&path3());
        assert_eq!(t.get(&v("a"), &v("b")), Some(1));
        assert_eq!(t.get(&v("c"), &v("b")), Some(1));
        assert_eq!(t.get(&v("a"), &v("c")), Some(2));

        let two = graph(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]);
        let t = all_pairs_distances(&two);
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(&v("a"), &v("c")), None);
    }

    #[test]
    fn average_path_length_cases() {
        assert_eq!(average_path_length(&triangle()).mean, 1.0);
        let p = average_path_length(&path3());
        assert!((p.mean - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.reachable_pairs, 3);
        let edgeless = graph(&["a", "b"], &[]);
        assert_eq!(
            average_path_length(&edgeless),
            PathLengthSummary { mean: 0.0, reachable_pairs: 0 }
        );
    }

    #[test]
    fn eccentricity_cases() {
        let r = eccentricity_report(&path3()).unwrap();
        assert_eq!(r.eccentricities, BTreeMap::from([(v("a"), 2), (v("b"), 1), (v("c"), 2)]));
        assert_eq!((r.radius, r.diameter), (1, 2));

        let r = eccentricity_report(&triangle()).unwrap();
        assert_eq!((r.radius, r.diameter), (1, 1));

        let with_isolated = graph(&["a", "b", "c", "z"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        let r = eccentricity_report(&with_isolated).unwrap();
        assert_eq!(r.eccentricities[&v("z")], 0);
        assert_eq!((r.radius, r.diameter), (0, 1));

        assert_eq!(
            eccentricity_report(&UndirectedGraph::default()),
            Err(MetricsError::EmptyGraph)
        );
    }

    #[test]
    fn clustering_cases() {
        let t = triangle();
        for id in t.ids() {
            assert_eq!(clustering_coefficient(&t, id).unwrap(), 1.0);
        }
        let s = star(3);
        assert_eq!(clustering_coefficient(&s, &v("hub")).unwrap(), 0.0);
        assert_eq!(clustering_coefficient(&s, &v("l0")).unwrap(), 0.0);
        assert_eq!(
            clustering_coefficient(&s, &v("nope")),
            Err(MetricsError::UnknownVertex(v("nope")))
        );
        // diamond: a-b, a-c, b-c, b-d, c-d; b has neighbours a,c,d with 2 links of 3
        let diamond = graph(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")],
        );
        assert!((clustering_coefficient(&diamond, &v("b")).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn clustering_vs_outdegree_cases() {
        let cycle = CrispDigraph::from_arcs([(v("a"), v("b")), (v("b"), v("c")), (v("c"), v("a"))]).unwrap();
        let rows = clustering_vs_outdegree(&cycle);
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.out_degree == 1 && r.clustering == 1.0));

        let star = CrispDigraph::from_arcs((0..3).map(|i| (v("hub"), v(&format!("l{i}"))))).unwrap();
        let rows = clustering_vs_outdegree(&star);
        assert_eq!(rows[0].vertex, v("hub"));
        assert_eq!((rows[0].out_degree, rows[0].clustering), (3, 0.0));
        assert!(rows[1..].iter().all(|r| r.out_degree == 0 && r.clustering == 0.0));

        assert!(clustering_vs_outdegree(&CrispDigraph::new()).is_empty());
    }

    #[test]
    fn assortativity_cases() {
        for leaves in 2..8 {
            let r = assortativity(&star(leaves)).unwrap().unwrap();
            assert!((r + 1.0).abs() < 1e-12, "star({leaves}) gave {r}");
        }
        assert_eq!(assortativity(&triangle()), Ok(None));
        let two = graph(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]);
        assert_eq!(assortativity(&two), Ok(None));
        assert_eq!(assortativity(&graph(&["a"], &[])), Err(MetricsError::NoEdges));
    }

    #[test]
    fn report_triangle() {
        let r = metrics_report(&triangle()).unwrap();
        assert_eq!(r.average_degree, 2.0);
        assert_eq!(r.average_path_length, 1.0);
        assert_eq!((r.radius, r.diameter), (1, 1));
        assert_eq!(r.average_clustering, 1.0);
        assert_eq!(r.assortativity, None);
    }

    #[test]
    fn report_star() {
        let r = metrics_report(&star(3)).unwrap();
        assert_eq!(r.average_degree, 1.5);
        assert_eq!(r.average_path_length, 1.5);
        assert_eq!(r.reachable_pairs, 6);
        assert_eq!((r.radius, r.diameter), (1, 2));
        assert_eq!(r.average_clustering, 0.0);
        assert!((r.assortativity.unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_edgeless_and_empty() {
        let r = metrics_report(&graph(&["a", "b"], &[])).unwrap();
        assert_eq!(r.assortativity, None);
        assert_eq!(r.average_path_length, 0.0);
        assert_eq!(metrics_report(&UndirectedGraph::default()), Err(MetricsError::EmptyGraph));
    }
}
