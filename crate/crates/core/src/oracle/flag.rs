//! Clique expansion of a filtered graph.

use std::collections::{BTreeMap, BTreeSet};

use crate::grade::{Grade, VertexId};
use crate::graph::FilteredGraph;

pub const DEFAULT_SIMPLEX_BUDGET: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("more than {limit} simplices; try a smaller instance or a lower dimension")]
    BudgetExceeded { limit: usize },
    #[error("grade {0} of the zigzag is missing from the grid")]
    GradeOffGrid(Grade),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simplex {
    pub vertices: Vec<VertexId>,
    pub grade: Grade,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Codimension-one faces, each obtained by dropping one vertex.
    pub fn facets(&self) -> impl Iterator<Item = Vec<VertexId>> + '_ {
        let n = self.vertices.len();
        (0..n).filter(move |_| n > 1).map(move |skip| {
            self.vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect()
        })
    }
}

/// Simplices sorted by `(grade, dimension, vertices)`, so every face comes
/// before its cofaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialFiltration {
    simplices: Vec<Simplex>,
}

impl SimplicialFiltration {
    pub fn new(mut simplices: Vec<Simplex>) -> Self {
        simplices.sort_by(|a, b| {
            (a.grade, a.dim(), &a.vertices).cmp(&(b.grade, b.dim(), &b.vertices))
        });
        SimplicialFiltration { simplices }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for s in &self.simplices {
            if counts.len() <= s.dim() {
                counts.resize(s.dim() + 1, 0);
            }
            counts[s.dim()] += 1;
        }
        counts
    }
}

/// All cliques with at most `max_vertices` vertices of the graph given by
/// `adjacency`, in lexicographic order of their sorted vertex lists.
pub(crate) fn cliques(
    adjacency: &BTreeMap<VertexId, BTreeSet<VertexId>>,
    max_vertices: usize,
    budget: usize,
) -> Result<Vec<Vec<VertexId>>, OracleError> {
    fn grow(
        adjacency: &BTreeMap<VertexId, BTreeSet<VertexId>>,
        clique: &mut Vec<VertexId>,
        candidates: &[VertexId],
        max_vertices: usize,
        budget: usize,
        out: &mut Vec<Vec<VertexId>>,
    ) -> Result<(), OracleError> {
        out.push(clique.clone());
        if out.len() > budget {
            return Err(OracleError::BudgetExceeded { limit: budget });
        }
        if clique.len() == max_vertices {
            return Ok(());
        }
        for (i, &v) in candidates.iter().enumerate() {
            let next: Vec<VertexId> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|w| adjacency[&v].contains(w))
                .collect();
            clique.push(v);
            grow(adjacency, clique, &next, max_vertices, budget, out)?;
            clique.pop();
        }
        Ok(())
    }

    let mut out = Vec::new();
    if max_vertices == 0 {
        return Ok(out);
    }
    for (&v, nbrs) in adjacency {
        let higher: Vec<VertexId> = nbrs.range(v..).copied().filter(|&w| w != v).collect();
        let mut clique = vec![v];
        grow(adjacency, &mut clique, &higher, max_vertices, budget, &mut out)?;
    }
    out.sort();
    Ok(out)
}

pub fn flag_expand(g: &FilteredGraph, max_dim: usize) -> Result<SimplicialFiltration, OracleError> {
    flag_expand_with_budget(g, max_dim, DEFAULT_SIMPLEX_BUDGET)
}

/// Every clique of at most `max_dim + 1` vertices, graded by the largest
/// grade among its vertices and edges.
pub fn flag_expand_with_budget(
    g: &FilteredGraph,
    max_dim: usize,
    budget: usize,
) -> Result<SimplicialFiltration, OracleError> {
    let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> = g.vertices().map(|v| (v, BTreeSet::new())).collect();
    let mut edge_grade = std::collections::HashMap::new();
    for e in g.edges() {
        adjacency.get_mut(&e.u).unwrap().insert(e.v);
        adjacency.get_mut(&e.v).unwrap().insert(e.u);
        edge_grade.insert((e.u, e.v), e.t);
    }
    let simplices = cliques(&adjacency, max_dim + 1, budget)?
        .into_iter()
        .map(|vertices| {
            let mut grade = vertices.iter().map(|&v| g.birth(v).unwrap()).max().unwrap();
            for (i, &a) in vertices.iter().enumerate() {
                for &b in &vertices[i + 1..] {
                    grade = grade.max(edge_grade[&(a, b)]);
                }
            }
            Simplex { vertices, grade }
        })
        .collect();
    Ok(SimplicialFiltration::new(simplices))
}
