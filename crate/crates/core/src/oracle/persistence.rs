//! Ordinary persistence by boundary-matrix reduction over Z/2.

use std::collections::HashMap;

use super::diagram::{Interval, IntervalConvention, PersistenceDiagram};
use super::flag::{flag_expand_with_budget, OracleError, SimplicialFiltration, DEFAULT_SIMPLEX_BUDGET};
use crate::grade::{Grade, VertexId};
use crate::graph::FilteredGraph;

/// Boundary columns in filtration order, each a sorted list of row indices.
pub(crate) fn boundary_matrix(f: &SimplicialFiltration) -> Vec<Vec<usize>> {
    let index: HashMap<&[VertexId], usize> =
        f.simplices().iter().enumerate().map(|(i, s)| (s.vertices.as_slice(), i)).collect();
    f.simplices()
        .iter()
        .map(|s| {
            let mut col: Vec<usize> = s.facets().map(|face| index[face.as_slice()]).collect();
            col.sort_unstable();
            col
        })
        .collect()
}

fn add_into(target: &mut Vec<usize>, source: &[usize]) {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < source.len() {
        match target[i].cmp(&source[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(source[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&source[j..]);
    *target = out;
}

/// Persistence pairs `(birth index, death index)` and unpaired indices.
pub(crate) fn reduce(columns: Vec<Vec<usize>>) -> (Vec<(usize, usize)>, Vec<usize>) {
    let n = columns.len();
    let mut columns = columns;
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut pairs = Vec::new();
    for j in 0..n {
        while let Some(&low) = columns[j].last() {
            match owner[low] {
                Some(k) => {
                    let (head, tail) = columns.split_at_mut(j);
                    add_into(&mut tail[0], &head[k]);
                }
                None => {
                    owner[low] = Some(j);
                    pairs.push((low, j));
                    break;
                }
            }
        }
    }
    let mut paired = vec![false; n];
    for &(b, d) in &pairs {
        paired[b] = true;
        paired[d] = true;
    }
    let essential = (0..n).filter(|&i| !paired[i]).collect();
    (pairs, essential)
}

/// Half-open diagram of `f` in dimensions `0..=max_dim`. Intervals of zero
/// length are dropped. Classes of dimension `max_dim` can only die if `f`
/// also holds simplices of dimension `max_dim + 1`.
pub fn persistence(f: &SimplicialFiltration, max_dim: usize) -> PersistenceDiagram {
    let simplices = f.simplices();
    let (pairs, essential) = reduce(boundary_matrix(f));
    let mut diagram = PersistenceDiagram::new(IntervalConvention::HalfOpen);
    for (b, d) in pairs {
        let dim = simplices[b].dim();
        let (birth, death) = (simplices[b].grade, simplices[d].grade);
        if dim <= max_dim && birth < death {
            diagram.push(dim, Interval::new(birth, death));
        }
    }
    for i in essential {
        let dim = simplices[i].dim();
        if dim <= max_dim {
            diagram.push(dim, Interval::new(simplices[i].grade, Grade::INFINITY));
        }
    }
    diagram
}

/// Diagram of the flag filtration of `g` in dimensions `0..=max_dim`.
pub fn flag_persistence(g: &FilteredGraph, max_dim: usize) -> Result<PersistenceDiagram, OracleError> {
    flag_persistence_with_budget(g, max_dim, DEFAULT_SIMPLEX_BUDGET)
}

pub fn flag_persistence_with_budget(
    g: &FilteredGraph,
    max_dim: usize,
    budget: usize,
) -> Result<PersistenceDiagram, OracleError> {
    let f = flag_expand_with_budget(g, max_dim + 1, budget)?;
    Ok(persistence(&f, max_dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: f64) -> Grade {
        Grade::from_f64(x)
    }

    #[test]
    fn hollow_square() {
        let sq = FilteredGraph::from_triples(&[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]).unwrap();
        let d = flag_persistence(&sq, 1).unwrap();
        assert_eq!(d.dimension(0), &[Interval::new(g(1.0), Grade::INFINITY)]);
        assert_eq!(d.dimension(1), &[Interval::new(g(1.0), Grade::INFINITY)]);
    }

    #[test]
    fn triangle_never_has_a_cycle() {
        let tri = FilteredGraph::from_triples(&[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)]).unwrap();
        let d = flag_persistence(&tri, 1).unwrap();
        assert!(d.dimension(1).is_empty());
        assert_eq!(d.dimension(0).len(), 1);
    }

    #[test]
    fn merging_components() {
        let path = FilteredGraph::from_triples(&[(0, 1, 1.0), (2, 3, 2.0), (1, 2, 5.0)]).unwrap();
        let d = flag_persistence(&path, 0).unwrap();
        assert_eq!(d.dimension(0), &[Interval::new(g(1.0), Grade::INFINITY), Interval::new(g(2.0), g(5.0))]);
    }
}
