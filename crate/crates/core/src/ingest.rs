//! Edge-list ingestion and the filtering pipeline: degree-range filter and
//! giant-component extraction.
//!
//! The edge list is comma-separated text with one `source,destination` arc
//! per row. A leading `source,destination` header (any case) is skipped.
//! A row with an empty destination (`id,`) declares an isolated vertex; this
//! is how the serializer keeps vertices without arcs.

use std::collections::{BTreeSet, VecDeque};
use std::io::Read;

use thiserror::Error;

use crate::graph::{CrispDigraph, UndirectedGraph, VertexId};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: expected 2 columns, found {found}")]
    WrongColumnCount { line: u64, found: usize },
    #[error("line {line}: invalid vertex id {id:?}")]
    InvalidId { line: u64, id: String },
    #[error("line {line}: self-arc on vertex {vertex}")]
    SelfArc { line: u64, vertex: VertexId },
    #[error("line {line}: duplicate arc {from} -> {to}")]
    DuplicateArc {
        line: u64,
        from: VertexId,
        to: VertexId,
    },
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("degree range is empty: min {min} > max {max}")]
    InvalidDegreeRange { min: usize, max: usize },
}

fn is_header(record: &csv::StringRecord) -> bool {
    record.len() == 2
        && record[0].eq_ignore_ascii_case("source")
        && record[1].eq_ignore_ascii_case("destination")
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

/// Parses an edge list. Blank lines are ignored; LF and CRLF both work.
pub fn parse_edge_list<R: Read>(input: R) -> Result<CrispDigraph, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut graph = CrispDigraph::new();
    let mut first = true;
    for result in reader.records() {
        let record = result.map_err(|e| IngestError::Csv {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if std::mem::take(&mut first) && is_header(&record) {
            continue;
        }
        if record.len() != 2 {
            return Err(IngestError::WrongColumnCount {
                line,
                found: record.len(),
            });
        }
        let (source, destination) = (&record[0], &record[1]);
        if !valid_id(source) {
            return Err(IngestError::InvalidId {
                line,
                id: source.to_owned(),
            });
        }
        if destination.is_empty() {
            graph.add_vertex(VertexId::from(source));
            continue;
        }
        if !valid_id(destination) {
            return Err(IngestError::InvalidId {
                line,
                id: destination.to_owned(),
            });
        }
        let (s, d) = (VertexId::from(source), VertexId::from(destination));
        if s == d {
            return Err(IngestError::SelfArc { line, vertex: s });
        }
        if graph.contains_arc(&s, &d) {
            return Err(IngestError::DuplicateArc { line, from: s, to: d });
        }
        graph.add_arc(s, d).expect("checked above");
    }
    Ok(graph)
}

/// Canonical edge-list text: `source,destination` header, arcs in sorted
/// order, then one `id,` row per vertex without arcs. LF line endings.
pub fn write_edge_list(g: &CrispDigraph) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = "writing to memory cannot fail";
    writer.write_record(["source", "destination"]).expect(io);
    for (s, d) in g.arcs() {
        writer.write_record([s.as_str(), d.as_str()]).expect(io);
    }
    for (v, deg) in g.total_degrees() {
        if deg == 0 {
            writer.write_record([v.as_str(), ""]).expect(io);
        }
    }
    let bytes = writer.into_inner().expect(io);
    String::from_utf8(bytes).expect("ids are UTF-8")
}

/// Weakly connected components, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<BTreeSet<VertexId>>,
}

impl ComponentDecomposition {
    /// Components of the undirected projection of `g`. Equal-size components
    /// are ordered by their smallest vertex id.
    pub fn of(g: &CrispDigraph) -> Self {
        let u = g.undirected_projection();
        let mut components: Vec<BTreeSet<VertexId>> = component_indices(&u)
            .into_iter()
            .map(|members| members.into_iter().map(|i| u.id(i).clone()).collect())
            .collect();
        components.sort_by(|a, b| {
            b.len()
                .cmp(&a.len())
                .then_with(|| a.first().cmp(&b.first()))
        });
        ComponentDecomposition { components }
    }

    pub fn largest(&self) -> Option<&BTreeSet<VertexId>> {
        self.components.first()
    }
}

/// Connected components of an undirected graph as index lists, in order of
/// their smallest index.
pub fn component_indices(g: &UndirectedGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut members = Vec::new();
        while let Some(x) = queue.pop_front() {
            members.push(x);
            for &y in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Induced subgraph on the largest weakly connected component; ties go to
/// the component with the smallest minimum vertex id. Empty in, empty out.
pub fn giant_component(g: &CrispDigraph) -> CrispDigraph {
    match ComponentDecomposition::of(g).largest() {
        Some(keep) => g.induced(keep),
        None => CrispDigraph::new(),
    }
}

/// Removes, in one pass, every vertex whose total degree in `g` lies outside
/// `[min, max]` (`max = None` is unbounded), together with its arcs. The
/// result is not re-filtered.
pub fn filter_degree_range(
    g: &CrispDigraph,
    min: usize,
    max: Option<usize>,
) -> Result<CrispDigraph, IngestError> {
    if let Some(max) = max {
        if min > max {
            return Err(IngestError::InvalidDegreeRange { min, max });
        }
    }
    let keep: BTreeSet<VertexId> = g
        .total_degrees()
        .into_iter()
        .filter(|&(_, d)| d >= min && max.is_none_or(|m| d <= m))
        .map(|(v, _)| v.clone())
        .collect();
    Ok(g.induced(&keep))
}

/// Unordered edge set of `g`.
pub fn undirected_projection(g: &CrispDigraph) -> UndirectedGraph {
    g.undirected_projection()
}
