//! Seeded synthetic topologies.
//!
//! * `PreferentialAttachment { n, m }`: a clique on `m + 1` vertices, then
//!   each new vertex joins `m` distinct existing vertices picked with
//!   probability proportional to their current degree.
//! * `CorePeriphery { core_size, cluster_count, cluster_size }`: a complete
//!   core plus `cluster_count` cliques, each tied to the core by one bridge
//!   edge. The bridge of cluster `i` joins its lowest-id vertex to the
//!   `(i mod core_size)`-th lowest core vertex.
//!
//! Vertex ids are zero-padded so that lexicographic and construction order
//! agree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{UndirectedGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthModel {
    PreferentialAttachment {
        n: usize,
        m: usize,
    },
    CorePeriphery {
        core_size: usize,
        cluster_count: usize,
        cluster_size: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthSpec {
    pub model: SynthModel,
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("preferential attachment needs m >= 1")]
    ZeroAttachment,
    #[error("preferential attachment needs n > m (n = {n}, m = {m})")]
    TooFewVertices { n: usize, m: usize },
    #[error("core must have at least 3 vertices, got {0}")]
    CoreTooSmall(usize),
    #[error("clusters must have at least 2 vertices, got {0}")]
    ClusterTooSmall(usize),
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        match self.model {
            SynthModel::PreferentialAttachment { n, m } => {
                if m == 0 {
                    Err(SynthError::ZeroAttachment)
                } else if n <= m {
                    Err(SynthError::TooFewVertices { n, m })
                } else {
                    Ok(())
                }
            }
            SynthModel::CorePeriphery {
                core_size,
                cluster_size,
                ..
            } => {
                if core_size < 3 {
                    Err(SynthError::CoreTooSmall(core_size))
                } else if cluster_size < 2 {
                    Err(SynthError::ClusterTooSmall(cluster_size))
                } else {
                    Ok(())
                }
            }
        }
    }
}

fn width(count: usize) -> usize {
    count.saturating_sub(1).to_string().len()
}

pub fn generate(spec: &SynthSpec) -> Result<UndirectedGraph, SynthError> {
    spec.validate()?;
    let graph = match spec.model {
        SynthModel::PreferentialAttachment { n, m } => preferential_attachment(n, m, spec.seed),
        SynthModel::CorePeriphery {
            core_size,
            cluster_count,
            cluster_size,
        } => core_periphery(core_size, cluster_count, cluster_size),
    };
    Ok(graph)
}

fn preferential_attachment(n: usize, m: usize, seed: u64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = width(n);
    let ids: Vec<VertexId> = (0..n).map(|i| VertexId::new(format!("{i:0w$}"))).collect();
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m * (m + 1) / 2 + (n - m - 1) * m);
    // one entry per edge endpoint, so a uniform pick is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for a in 0..=m {
        for b in a + 1..=m {
            edges.push((a, b));
            endpoints.extend([a, b]);
        }
    }
    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for new in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let pick = endpoints[rng.gen_range(0..endpoints.len() as u64) as usize];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            endpoints.extend([t, new]);
        }
    }
    UndirectedGraph::from_edges(
        ids.iter().cloned(),
        edges.into_iter().map(|(a, b)| (ids[a].clone(), ids[b].clone())),
    )
    .expect("generated edges are simple")
}

fn core_periphery(core_size: usize, cluster_count: usize, cluster_size: usize) -> UndirectedGraph {
    let cw = width(core_size);
    let kw = width(cluster_count);
    let mw = width(cluster_size);
    let core: Vec<VertexId> = (0..core_size)
        .map(|i| VertexId::new(format!("core-{i:0cw$}")))
        .collect();
    let mut vertices = core.clone();
    let mut edges = Vec::new();
    for a in 0..core_size {
        for b in a + 1..core_size {
            edges.push((core[a].clone(), core[b].clone()));
        }
    }
    for c in 0..cluster_count {
        let members: Vec<VertexId> = (0..cluster_size)
            .map(|j| VertexId::new(format!("cluster-{c:0kw$}-{j:0mw$}")))
            .collect();
        for a in 0..cluster_size {
            for b in a + 1..cluster_size {
                edges.push((members[a].clone(), members[b].clone()));
            }
        }
        edges.push((core[c % core_size].clone(), members[0].clone()));
        vertices.extend(members);
    }
    UndirectedGraph::from_edges(vertices, edges).expect("generated edges are simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::component_indices;

    fn pa(n: usize, m: usize, seed: u64) -> SynthSpec {
        SynthSpec {
            model: SynthModel::PreferentialAttachment { n, m },
            seed,
        }
    }

    fn cp(core_size: usize, cluster_count: usize, cluster_size: usize) -> SynthSpec {
        SynthSpec {
            model: SynthModel::CorePeriphery {
                core_size,
                cluster_count,
                cluster_size,
            },
            seed: 0,
        }
    }

    #[test]
    fn pa_with_one_link_is_a_tree() {
        let g = generate(&pa(5, 1, 7)).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(component_indices(&g).len(), 1);
    }

    #[test]
    fn pa_edge_count_formula() {
        for (n, m) in [(10, 1), (10, 3), (50, 4), (200, 8), (9, 8)] {
            let g = generate(&pa(n, m, 3)).unwrap();
            assert_eq!(g.edge_count(), m * (m + 1) / 2 + (n - m - 1) * m, "n={n} m={m}");
        }
    }

    #[test]
    fn pa_is_seed_deterministic() {
        assert_eq!(generate(&pa(300, 3, 11)).unwrap(), generate(&pa(300, 3, 11)).unwrap());
        assert_ne!(generate(&pa(300, 3, 11)).unwrap(), generate(&pa(300, 3, 12)).unwrap());
    }

    #[test]
    fn pa_ids_sort_in_construction_order() {
        let g = generate(&pa(12, 2, 0)).unwrap();
        assert_eq!(g.id(0).as_str(), "00");
        assert_eq!(g.id(11).as_str(), "11");
        // the seed clique is 00-01-02
        assert!(g.has_edge(0, 1) && g.has_edge(0, 2) && g.has_edge(1, 2));
    }

    #[test]
    fn core_periphery_counts() {
        let g = generate(&cp(4, 2, 3)).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 14);
        assert_eq!(component_indices(&g).len(), 1);
        assert_eq!(generate(&cp(4, 2, 3)).unwrap(), g);
    }

    #[test]
    fn core_periphery_bridges_round_robin() {
        let g = generate(&cp(3, 4, 2)).unwrap();
        let bridge = |cluster: &str, core: &str| {
            let a = g.index_of(&VertexId::from(cluster)).unwrap();
            let b = g.index_of(&VertexId::from(core)).unwrap();
            g.has_edge(a, b)
        };
        assert!(bridge("cluster-0-0", "core-0"));
        assert!(bridge("cluster-1-0", "core-1"));
        assert!(bridge("cluster-2-0", "core-2"));
        assert!(bridge("cluster-3-0", "core-0"));
        assert!(!bridge("cluster-0-1", "core-0"));
    }

    #[test]
    fn invalid_specs() {
        assert_eq!(generate(&pa(5, 0, 0)), Err(SynthError::ZeroAttachment));
        assert_eq!(generate(&pa(3, 3, 0)), Err(SynthError::TooFewVertices { n: 3, m: 3 }));
        assert_eq!(generate(&cp(2, 1, 3)), Err(SynthError::CoreTooSmall(2)));
        assert_eq!(generate(&cp(3, 1, 1)), Err(SynthError::ClusterTooSmall(1)));
    }
}
