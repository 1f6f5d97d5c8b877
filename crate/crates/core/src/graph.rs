//! Graded 1-skeletons. A [`FilteredGraph`] fully determines a flag filtration:
//! the complex at grade `t` is the clique complex of the vertices and edges
//! whose grades are at most `t`.

use std::collections::BTreeMap;

use crate::grade::{Grade, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {vertex} born at {birth} after incident edge ({u}, {v}) at {grade}")]
    BirthAfterEdge {
        vertex: VertexId,
        birth: Grade,
        u: VertexId,
        v: VertexId,
        grade: Grade,
    },
    #[error("non-finite grade {0} on edge ({1}, {2})")]
    NonFiniteEdge(Grade, VertexId, VertexId),
    #[error("non-finite birth grade {1} for vertex {0}")]
    NonFiniteBirth(VertexId, Grade),
}

/// An undirected edge with a grade, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FilteredEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub t: Grade,
}

impl FilteredEdge {
    pub fn new(a: impl Into<VertexId>, b: impl Into<VertexId>, t: Grade) -> Result<Self, GraphError> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(FilteredEdge { u: a, v: b, t }),
            std::cmp::Ordering::Greater => Ok(FilteredEdge { u: b, v: a, t }),
            std::cmp::Ordering::Equal => Err(GraphError::SelfLoop(a)),
        }
    }

    /// Sort key `(t, u, v)` used for every edge listing.
    pub fn key(&self) -> (Grade, VertexId, VertexId) {
        (self.t, self.u, self.v)
    }

    pub fn pair(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn with_grade(self, t: Grade) -> Self {
        FilteredEdge { t, ..self }
    }
}

impl PartialOrd for FilteredEdge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FilteredEdge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Vertex birth grades plus an edge list sorted by `(t, u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredGraph {
    births: BTreeMap<VertexId, Grade>,
    edges: Vec<FilteredEdge>,
}

impl FilteredGraph {
    /// Builds and validates a graph. Endpoints without an explicit birth are
    /// born at the grade of their earliest incident edge.
    pub fn new(
        births: impl IntoIterator<Item = (VertexId, Grade)>,
        edges: impl IntoIterator<Item = FilteredEdge>,
    ) -> Result<Self, GraphError> {
        let mut births: BTreeMap<VertexId, Grade> = births.into_iter().collect();
        for (&v, &b) in &births {
            if !b.is_finite() {
                return Err(GraphError::NonFiniteBirth(v, b));
            }
        }
        let mut edges: Vec<FilteredEdge> = edges.into_iter().collect();
        for e in &edges {
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
            if !e.t.is_finite() {
                return Err(GraphError::NonFiniteEdge(e.t, e.u, e.v));
            }
        }
        edges.sort_unstable();
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for e in &edges {
            if !seen.insert(e.pair()) {
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
        }
        // Edges are sorted by grade, so the first visit of a vertex is its earliest edge.
        let mut implicit = BTreeMap::new();
        for e in &edges {
            for x in [e.u, e.v] {
                match births.get(&x) {
                    Some(&b) if b > e.t => {
                        return Err(GraphError::BirthAfterEdge {
                            vertex: x,
                            birth: b,
                            u: e.u,
                            v: e.v,
                            grade: e.t,
                        })
                    }
                    Some(_) => {}
                    None => {
                        implicit.entry(x).or_insert(e.t);
                    }
                }
            }
        }
        births.extend(implicit);
        Ok(FilteredGraph { births, edges })
    }

    pub fn from_edges(edges: impl IntoIterator<Item = FilteredEdge>) -> Result<Self, GraphError> {
        Self::new(std::iter::empty(), edges)
    }

    /// Convenience constructor from raw `(u, v, t)` triples.
    pub fn from_triples(triples: &[(u32, u32, f64)]) -> Result<Self, GraphError> {
        let edges = triples
            .iter()
            .map(|&(u, v, t)| FilteredEdge::new(u, v, Grade::from_f64(t)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_edges(edges)
    }

    /// Same vertex births, different edge set.
    pub fn with_edges(&self, edges: impl IntoIterator<Item = FilteredEdge>) -> Result<Self, GraphError> {
        Self::new(self.births.clone(), edges)
    }

    pub fn births(&self) -> &BTreeMap<VertexId, Grade> {
        &self.births
    }

    pub fn birth(&self, v: VertexId) -> Option<Grade> {
        self.births.get(&v).copied()
    }

    pub fn edges(&self) -> &[FilteredEdge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.births.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.births.keys().copied()
    }

    /// True when no two edges share a grade.
    pub fn has_distinct_grades(&self) -> bool {
        self.edges.windows(2).all(|w| w[0].t != w[1].t)
    }

    /// Largest vertex degree in the full graph.
    pub fn max_degree(&self) -> usize {
        let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
        for e in &self.edges {
            *deg.entry(e.u).or_default() += 1;
            *deg.entry(e.v).or_default() += 1;
        }
        deg.values().copied().max().unwrap_or(0)
    }
}
