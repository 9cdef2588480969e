//! Fuzzy-graph models of communication networks.
//!
//! The crate covers the whole analysis path for an overlay topology:
//!
//! * [`fuzzy`]: fuzzy graphs `(σ, μ)`, validity checks, subgraph relations,
//!   induced subgraphs, alpha-cuts and taxonomy classification;
//! * [`ingest`]: edge-list parsing and the giant-component / degree-range
//!   pipeline;
//! * [`percolation`]: seeded random node removal and removal-fraction sweeps;
//! * [`metrics`]: degree distribution, power-law fit, path lengths,
//!   eccentricity, clustering and assortativity;
//! * [`synth`]: deterministic preferential-attachment and core-periphery
//!   generators.
//!
//! ```
//! use fuzznet::ingest::parse_edge_list;
//! use fuzznet::metrics::metrics_report;
//!
//! let g = parse_edge_list("a,b\nb,c\nc,a\n".as_bytes()).unwrap();
//! let report = metrics_report(&g.undirected_projection()).unwrap();
//! assert_eq!(report.average_path_length, 1.0);
//! ```

pub mod fuzzy;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod percolation;
pub mod synth;

pub use fuzzy::{FuzzyGraph, GraphClass, MembershipDegree};
pub use graph::{CrispDigraph, UndirectedGraph, VertexId};
pub use metrics::MetricsReport;
pub use percolation::{PercolationOutcome, PercolationSpec, SweepSeries};
