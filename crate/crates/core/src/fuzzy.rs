//! Fuzzy graphs `G: (σ, μ)`.
//!
//! A fuzzy graph assigns every vertex a membership degree `σ(v) ∈ [0, 1]` and
//! every unordered vertex pair a membership degree `μ(u, v)` bounded by
//! `σ(u) ∧ σ(v)`. Edge memberships are keyed by unordered pair, so the
//! relation is symmetric by construction. A crisp graph is the special case
//! where every membership is exactly 1.
//!
//! Membership degrees read from text carry at most six fractional digits and
//! are compared exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{CrispDigraph, VertexId};

/// Maximum number of fractional digits accepted when parsing a degree.
pub const MAX_FRACTION_DIGITS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzyError {
    #[error("membership degree {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("membership degree {0:?} is not a decimal number")]
    NotDecimal(String),
    #[error("membership degree {0:?} has more than {MAX_FRACTION_DIGITS} fractional digits")]
    TooPrecise(String),
    #[error("self-pair {{{0}, {0}}} is not allowed in an irreflexive relation")]
    ReflexivePair(VertexId),
    #[error("vertex {vertex} has ν = {nu} above σ = {sigma}")]
    ExceedsSigma {
        vertex: VertexId,
        nu: f64,
        sigma: f64,
    },
    #[error("vertex {0} is not part of the graph")]
    UnknownVertex(VertexId),
    #[error("alpha-cut threshold must be positive")]
    ZeroAlpha,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A degree of membership in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct MembershipDegree(f64);

impl MembershipDegree {
    pub const ZERO: MembershipDegree = MembershipDegree(0.0);
    pub const ONE: MembershipDegree = MembershipDegree(1.0);

    pub fn new(value: f64) -> Result<Self, FuzzyError> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            // fold -0.0 into 0.0
            Ok(MembershipDegree(value + 0.0))
        } else {
            Err(FuzzyError::OutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    pub fn min(self, other: MembershipDegree) -> MembershipDegree {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }
}

impl FromStr for MembershipDegree {
    type Err = FuzzyError;

    /// Parses plain decimal text (`1`, `0.5`, `.25`) with at most six
    /// fractional digits. Exponents and signs other than a leading `+` are
    /// rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.strip_prefix('+').unwrap_or(s);
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty()) || !digits_ok(int_part) || !digits_ok(frac_part) {
            return Err(FuzzyError::NotDecimal(s.to_owned()));
        }
        if frac_part.len() > MAX_FRACTION_DIGITS {
            return Err(FuzzyError::TooPrecise(s.to_owned()));
        }
        let value: f64 = body
            .parse()
            .map_err(|_| FuzzyError::NotDecimal(s.to_owned()))?;
        MembershipDegree::new(value)
    }
}

impl fmt::Display for MembershipDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // shortest representation that round-trips
        write!(f, "{}", self.0)
    }
}

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPair(VertexId, VertexId);

impl VertexPair {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if b < a {
            VertexPair(b, a)
        } else {
            VertexPair(a, b)
        }
    }

    pub fn first(&self) -> &VertexId {
        &self.0
    }

    pub fn second(&self) -> &VertexId {
        &self.1
    }

    pub fn is_self_pair(&self) -> bool {
        self.0 == self.1
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// The vertex membership function σ.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FuzzyVertexSet {
    entries: BTreeMap<VertexId, MembershipDegree>,
}

impl FuzzyVertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `σ(v)`, returning the previous degree if `v` was already present.
    pub fn insert(&mut self, v: VertexId, degree: MembershipDegree) -> Option<MembershipDegree> {
        self.entries.insert(v, degree)
    }

    /// Degree of `v`; absent vertices have degree 0.
    pub fn degree(&self, v: &VertexId) -> MembershipDegree {
        self.entries.get(v).copied().unwrap_or(MembershipDegree::ZERO)
    }

    pub fn get(&self, v: &VertexId) -> Option<MembershipDegree> {
        self.entries.get(v).copied()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.entries.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, MembershipDegree)> + '_ {
        self.entries.iter().map(|(v, d)| (v, *d))
    }
}

impl FromIterator<(VertexId, MembershipDegree)> for FuzzyVertexSet {
    fn from_iter<I: IntoIterator<Item = (VertexId, MembershipDegree)>>(iter: I) -> Self {
        FuzzyVertexSet {
            entries: iter.into_iter().collect(),
        }
    }
}

/// The edge membership relation μ, keyed by unordered pair.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FuzzyEdgeRelation {
    entries: BTreeMap<VertexPair, MembershipDegree>,
    reflexive_allowed: bool,
}

impl FuzzyEdgeRelation {
    pub fn new() -> Self {
        Self::default()
    }

    /// A relation that also accepts self-pairs `{u, u}`.
    pub fn reflexive() -> Self {
        FuzzyEdgeRelation {
            entries: BTreeMap::new(),
            reflexive_allowed: true,
        }
    }

    pub fn allows_reflexive(&self) -> bool {
        self.reflexive_allowed
    }

    /// Sets `μ(a, b) = μ(b, a)`, returning the previous degree.
    pub fn insert(
        &mut self,
        a: VertexId,
        b: VertexId,
        degree: MembershipDegree,
    ) -> Result<Option<MembershipDegree>, FuzzyError> {
        if a == b && !self.reflexive_allowed {
            return Err(FuzzyError::ReflexivePair(a));
        }
        Ok(self.entries.insert(VertexPair::new(a, b), degree))
    }

    /// `μ(a, b)`; absent pairs have degree 0.
    pub fn degree(&self, a: &VertexId, b: &VertexId) -> MembershipDegree {
        self.entries
            .get(&VertexPair::new(a.clone(), b.clone()))
            .copied()
            .unwrap_or(MembershipDegree::ZERO)
    }

    pub fn get(&self, pair: &VertexPair) -> Option<MembershipDegree> {
        self.entries.get(pair).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexPair, MembershipDegree)> + '_ {
        self.entries.iter().map(|(p, d)| (p, *d))
    }
}

/// One failed fuzzy-graph invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// An edge names a vertex missing from σ.
    MissingEndpoint { pair: VertexPair, vertex: VertexId },
    /// `μ(x, y) > σ(x) ∧ σ(y)`.
    EdgeExceedsVertices {
        pair: VertexPair,
        mu: f64,
        sigma_first: f64,
        sigma_second: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingEndpoint { pair, vertex } => {
                write!(f, "edge {pair}: endpoint {vertex} has no vertex membership")
            }
            Violation::EdgeExceedsVertices {
                pair,
                mu,
                sigma_first,
                sigma_second,
            } => write!(
                f,
                "edge {pair}: μ = {mu} exceeds min(σ) = min({sigma_first}, {sigma_second})"
            ),
        }
    }
}

/// Outcome of [`FuzzyGraph::validate`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A fuzzy graph `(σ, μ)`.
///
/// Construction does not check the membership bound; call
/// [`validate`](Self::validate) on candidate data, or use
/// [`try_new`](Self::try_new).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FuzzyGraph {
    sigma: FuzzyVertexSet,
    mu: FuzzyEdgeRelation,
}

impl FuzzyGraph {
    pub fn new(sigma: FuzzyVertexSet, mu: FuzzyEdgeRelation) -> Self {
        FuzzyGraph { sigma, mu }
    }

    /// Builds the graph, failing with the full violation list if it is invalid.
    pub fn try_new(sigma: FuzzyVertexSet, mu: FuzzyEdgeRelation) -> Result<Self, Validation> {
        let g = FuzzyGraph { sigma, mu };
        let verdict = g.validate();
        if verdict.is_ok() {
            Ok(g)
        } else {
            Err(verdict)
        }
    }

    pub fn sigma(&self) -> &FuzzyVertexSet {
        &self.sigma
    }

    pub fn mu(&self) -> &FuzzyEdgeRelation {
        &self.mu
    }

    /// Reports every edge whose endpoint is missing or whose membership
    /// exceeds the smaller endpoint membership.
    pub fn validate(&self) -> Validation {
        let mut violations = Vec::new();
        for (pair, mu) in self.mu.iter() {
            let endpoints = if pair.is_self_pair() {
                &[pair.first()][..]
            } else {
                &[pair.first(), pair.second()][..]
            };
            let before = violations.len();
            for &v in endpoints {
                if !self.sigma.contains(v) {
                    violations.push(Violation::MissingEndpoint {
                        pair: pair.clone(),
                        vertex: v.clone(),
                    });
                }
            }
            if violations.len() != before {
                continue;
            }
            let s1 = self.sigma.degree(pair.first());
            let s2 = self.sigma.degree(pair.second());
            if mu > s1.min(s2) {
                violations.push(Violation::EdgeExceedsVertices {
                    pair: pair.clone(),
                    mu: mu.value(),
                    sigma_first: s1.value(),
                    sigma_second: s2.value(),
                });
            }
        }
        Validation { violations }
    }

    /// The crisp graph as a fuzzy graph: σ = 1 on every vertex and μ = 1 on
    /// every pair joined by an arc in either direction.
    pub fn from_crisp(g: &CrispDigraph) -> FuzzyGraph {
        let sigma = g
            .vertices()
            .iter()
            .map(|v| (v.clone(), MembershipDegree::ONE))
            .collect();
        let mut mu = FuzzyEdgeRelation::new();
        for (s, d) in g.arcs() {
            mu.insert(s.clone(), d.clone(), MembershipDegree::ONE)
                .expect("digraphs carry no self-arcs");
        }
        FuzzyGraph { sigma, mu }
    }

    /// `σ' ≤ σ` and `μ' ≤ μ` pointwise, with absent elements at degree 0.
    pub fn is_partial_subgraph_of(&self, g: &FuzzyGraph) -> bool {
        self.sigma.iter().all(|(v, d)| d <= g.sigma.degree(v))
            && self
                .mu
                .iter()
                .all(|(p, d)| d <= g.mu.get(p).unwrap_or(MembershipDegree::ZERO))
    }

    /// `σ' = σ` and `μ' ≤ μ` pointwise.
    pub fn is_spanning_subgraph_of(&self, g: &FuzzyGraph) -> bool {
        let same_sigma = self.sigma.len() == g.sigma.len()
            && self.sigma.iter().all(|(v, d)| g.sigma.get(v) == Some(d));
        same_sigma
            && self
                .mu
                .iter()
                .all(|(p, d)| d <= g.mu.get(p).unwrap_or(MembershipDegree::ZERO))
    }

    /// Fuzzy subgraph induced by `nu ⊆ σ`: vertex set ν and
    /// `τ(u, v) = ν(u) ∧ ν(v) ∧ μ(u, v)` on every pair with `μ(u, v) > 0`.
    pub fn induced_subgraph(&self, nu: &FuzzyVertexSet) -> Result<FuzzyGraph, FuzzyError> {
        for (v, d) in nu.iter() {
            let Some(sigma) = self.sigma.get(v) else {
                return Err(FuzzyError::UnknownVertex(v.clone()));
            };
            if d > sigma {
                return Err(FuzzyError::ExceedsSigma {
                    vertex: v.clone(),
                    nu: d.value(),
                    sigma: sigma.value(),
                });
            }
        }
        let mut tau = FuzzyEdgeRelation {
            entries: BTreeMap::new(),
            reflexive_allowed: self.mu.reflexive_allowed,
        };
        for (pair, mu) in self.mu.iter() {
            if mu.value() <= 0.0 {
                continue;
            }
            let (Some(a), Some(b)) = (nu.get(pair.first()), nu.get(pair.second())) else {
                continue;
            };
            tau.entries.insert(pair.clone(), a.min(b).min(mu));
        }
        Ok(FuzzyGraph {
            sigma: nu.clone(),
            mu: tau,
        })
    }

    /// Crisp realization at threshold `alpha`: vertices with `σ ≥ alpha` and
    /// edges with `μ ≥ alpha` between kept vertices, each edge emitted as a
    /// symmetric pair of arcs. Self-pairs are not representable and are
    /// dropped.
    pub fn alpha_cut(&self, alpha: MembershipDegree) -> Result<CrispDigraph, FuzzyError> {
        if alpha.value() <= 0.0 {
            return Err(FuzzyError::ZeroAlpha);
        }
        let vertices: BTreeSet<VertexId> = self
            .sigma
            .iter()
            .filter(|(_, d)| *d >= alpha)
            .map(|(v, _)| v.clone())
            .collect();
        let mut arcs = Vec::new();
        for (pair, mu) in self.mu.iter() {
            if mu >= alpha
                && !pair.is_self_pair()
                && vertices.contains(pair.first())
                && vertices.contains(pair.second())
            {
                arcs.push((pair.first().clone(), pair.second().clone()));
                arcs.push((pair.second().clone(), pair.first().clone()));
            }
        }
        Ok(CrispDigraph::from_parts(vertices, arcs).expect("alpha-cut arcs are well formed"))
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// # comment
    /// v <id> <sigma>
    /// e <id> <id> <mu>
    /// ```
    ///
    /// Duplicate vertex or edge lines are rejected. The result is not
    /// validated.
    pub fn parse_text(text: &str) -> Result<FuzzyGraph, FuzzyError> {
        let mut sigma = FuzzyVertexSet::new();
        let mut mu = FuzzyEdgeRelation::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| FuzzyError::Parse { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens.as_slice() {
                ["v", id, degree] => {
                    let d: MembershipDegree = degree.parse().map_err(|e: FuzzyError| err(e.to_string()))?;
                    if sigma.insert(VertexId::from(*id), d).is_some() {
                        return Err(err(format!("duplicate vertex {id}")));
                    }
                }
                ["e", a, b, degree] => {
                    let d: MembershipDegree = degree.parse().map_err(|e: FuzzyError| err(e.to_string()))?;
                    let previous = mu
                        .insert(VertexId::from(*a), VertexId::from(*b), d)
                        .map_err(|e| err(e.to_string()))?;
                    if previous.is_some() {
                        return Err(err(format!("duplicate edge {{{a}, {b}}}")));
                    }
                }
                _ => return Err(err(format!("unrecognised line {content:?}"))),
            }
        }
        Ok(FuzzyGraph { sigma, mu })
    }

    /// Writes the text format, vertices first, both sections sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, d) in self.sigma.iter() {
            out.push_str(&format!("v {v} {d}\n"));
        }
        for (p, d) in self.mu.iter() {
            out.push_str(&format!("e {} {} {d}\n", p.first(), p.second()));
        }
        out
    }
}

/// Classes of the fuzzy-graph taxonomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphClass {
    /// Fuzzy set of crisp graphs. Label only; [`classify`] never returns it.
    TypeI,
    /// Crisp vertex set, fuzzy edge set.
    TypeII,
    /// Crisp vertices and edges with fuzzy connectivity.
    TypeIII,
    /// Fuzzy vertex set, crisp edge set.
    TypeIV,
    /// Crisp graph with fuzzy edge weights.
    TypeV,
    Crisp,
}

/// An aspect of a graph that can be uncertain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FuzzyAspect {
    Vertices,
    Edges,
    Connectivity,
    Weights,
}

impl fmt::Display for FuzzyAspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FuzzyAspect::Vertices => "vertex memberships",
            FuzzyAspect::Edges => "edge memberships",
            FuzzyAspect::Connectivity => "edge connectivity",
            FuzzyAspect::Weights => "edge weights",
        })
    }
}

/// Which aspects of a graph the modeller declares fuzzy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FuzzyAspects {
    pub vertices: bool,
    pub edges: bool,
    pub connectivity: bool,
    pub weights: bool,
}

impl FuzzyAspects {
    pub fn crisp() -> Self {
        Self::default()
    }

    pub fn declared(&self) -> BTreeSet<FuzzyAspect> {
        [
            (self.vertices, FuzzyAspect::Vertices),
            (self.edges, FuzzyAspect::Edges),
            (self.connectivity, FuzzyAspect::Connectivity),
            (self.weights, FuzzyAspect::Weights),
        ]
        .into_iter()
        .filter_map(|(on, a)| on.then_some(a))
        .collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("unclassifiable: several fuzzy aspects declared ({})", join_aspects(.0))]
    Unclassifiable(BTreeSet<FuzzyAspect>),
    #[error("vertex memberships declared crisp but σ({vertex}) = {sigma}")]
    FuzzyVertexDeclaredCrisp { vertex: VertexId, sigma: f64 },
    #[error("edge memberships declared crisp but μ{pair} = {mu} differs from min(σ) = {bound}")]
    FuzzyEdgeDeclaredCrisp { pair: VertexPair, mu: f64, bound: f64 },
}

fn join_aspects(aspects: &BTreeSet<FuzzyAspect>) -> String {
    aspects
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// A fuzzy graph together with the declaration of which aspects are fuzzy.
#[derive(Clone, Copy, Debug)]
pub struct AnnotatedGraph<'a> {
    pub graph: &'a FuzzyGraph,
    pub aspects: FuzzyAspects,
}

/// Places an annotated graph in the taxonomy.
///
/// The declaration decides the class. Values only serve to reject
/// declarations they contradict: crisp vertices require every `σ = 1`, and
/// crisp edges require every `μ(u, v) = σ(u) ∧ σ(v)` (the edge exists exactly
/// when both endpoints do). A fuzzy declaration is accepted even if every
/// value happens to be 1.
pub fn classify(annotated: AnnotatedGraph<'_>) -> Result<GraphClass, ClassifyError> {
    let AnnotatedGraph { graph, aspects } = annotated;
    if !aspects.vertices {
        if let Some((v, d)) = graph.sigma.iter().find(|(_, d)| !d.is_one()) {
            return Err(ClassifyError::FuzzyVertexDeclaredCrisp {
                vertex: v.clone(),
                sigma: d.value(),
            });
        }
    }
    if !aspects.edges {
        for (pair, mu) in graph.mu.iter() {
            let bound = graph
                .sigma
                .degree(pair.first())
                .min(graph.sigma.degree(pair.second()));
            if mu != bound {
                return Err(ClassifyError::FuzzyEdgeDeclaredCrisp {
                    pair: pair.clone(),
                    mu: mu.value(),
                    bound: bound.value(),
                });
            }
        }
    }
    let declared = aspects.declared();
    let mut it = declared.iter();
    match (it.next(), it.next()) {
        (None, _) => Ok(GraphClass::Crisp),
        (Some(aspect), None) => Ok(match aspect {
            FuzzyAspect::Vertices => GraphClass::TypeIV,
            FuzzyAspect::Edges => GraphClass::TypeII,
            FuzzyAspect::Connectivity => GraphClass::TypeIII,
            FuzzyAspect::Weights => GraphClass::TypeV,
        }),
        _ => Err(ClassifyError::Unclassifiable(declared)),
    }
}
