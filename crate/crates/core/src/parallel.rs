//! Divide-and-conquer backward reduction.
//!
//! The edge sequence is cut into contiguous ranges. A range `[lo, hi)` is
//! reduced against the prefix `edges[..hi]` only: edges after `hi` cannot
//! influence decisions taken at grades below `edges[hi].t`. Two neighboring
//! ranges are merged by taking the state of the right one and resuming the
//! edges the left one had to drop, as if they were all inserted at the first
//! grade of the right range. The result is identical to the sequential sweep.

use crate::collapse::{BackwardSweep, CollapseResult, CollapseStats, Outcome};
use crate::grade::Grade;
use crate::graph::{FilteredEdge, FilteredGraph};
use crate::neighborhood::{NeighborhoodMap, Representation};

/// Smallest range worth a task of its own.
pub const MIN_LEAF_EDGES: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParallelError {
    #[error("number of parts must be a power of two, got {0}")]
    PartsNotPowerOfTwo(usize),
    #[error("grade {grade} is shared by edges {left} and {right} on both sides of a split")]
    TieAcrossSplit { grade: Grade, left: usize, right: usize },
}

/// Contiguous ranges of the grade-sorted edge list, one per leaf task.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    bounds: Vec<usize>,
}

impl PartitionPlan {
    /// Halves `[0, n)` recursively into `parts` ranges.
    pub fn new(n: usize, parts: usize) -> Result<Self, ParallelError> {
        if parts == 0 || !parts.is_power_of_two() {
            return Err(ParallelError::PartsNotPowerOfTwo(parts));
        }
        let mut bounds = vec![0, n];
        let mut width = 1;
        while width < parts {
            let mut next = Vec::with_capacity(bounds.len() * 2);
            for w in bounds.windows(2) {
                next.push(w[0]);
                next.push(w[0] + (w[1] - w[0]) / 2);
            }
            next.push(n);
            bounds = next;
            width *= 2;
        }
        Ok(PartitionPlan { bounds })
    }

    /// Like [`Self::new`], but rejects splits that separate equal grades.
    pub fn for_edges(edges: &[FilteredEdge], parts: usize) -> Result<Self, ParallelError> {
        let plan = Self::new(edges.len(), parts)?;
        for &b in plan.split_points() {
            if b > 0 && b < edges.len() && edges[b - 1].t == edges[b].t {
                return Err(ParallelError::TieAcrossSplit {
                    grade: edges[b].t,
                    left: b - 1,
                    right: b,
                });
            }
        }
        Ok(plan)
    }

    /// Interior boundaries (may repeat when ranges are empty).
    pub fn split_points(&self) -> &[usize] {
        &self.bounds[1..self.bounds.len() - 1]
    }

    pub fn ranges(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.bounds.windows(2).map(|w| w[0]..w[1])
    }

    pub fn parts(&self) -> usize {
        self.bounds.len() - 1
    }
}

/// Number of parts for `threads` workers: the next power of two, reduced
/// until every part holds at least [`MIN_LEAF_EDGES`] edges.
pub fn parts_for_threads(threads: usize, num_edges: usize) -> usize {
    let mut parts = threads.max(1).next_power_of_two();
    while parts > 1 && num_edges / parts < MIN_LEAF_EDGES {
        parts /= 2;
    }
    parts
}

pub fn parallel_backward_collapse(g: &FilteredGraph, parts: usize) -> Result<CollapseResult, ParallelError> {
    parallel_backward_collapse_with(g, parts, Representation::default())
}

/// Backward reduction split into `parts` ranges processed with rayon.
/// The output equals [`crate::collapse::backward_collapse_with`] exactly.
pub fn parallel_backward_collapse_with(
    g: &FilteredGraph,
    parts: usize,
    repr: Representation,
) -> Result<CollapseResult, ParallelError> {
    let edges = g.edges();
    PartitionPlan::for_edges(edges, parts)?;
    let vertices: Vec<_> = g.vertices().collect();
    let ctx = Ctx { edges, vertices: &vertices, repr };
    let state = ctx.reduce(0, edges.len(), parts);
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for (e, outcome) in edges.iter().zip(&state.outcomes) {
        match outcome {
            Outcome::Kept(t) => kept.push(e.with_grade(*t)),
            Outcome::Removed => removed.push(*e),
        }
    }
    Ok(CollapseResult::assemble(g, kept, removed, state.stats))
}

struct Ctx<'a> {
    edges: &'a [FilteredEdge],
    vertices: &'a [crate::grade::VertexId],
    repr: Representation,
}

/// Sweep state after reducing `[lo, hi)` against `edges[..hi]`.
struct RangeState {
    sweep: BackwardSweep,
    outcomes: Vec<Outcome>,
    stats: CollapseStats,
}

impl Ctx<'_> {
    fn reduce(&self, lo: usize, hi: usize, parts: usize) -> RangeState {
        if parts <= 1 || hi - lo < 2 {
            return self.leaf(lo, hi);
        }
        let mid = lo + (hi - lo) / 2;
        let (left, right) = rayon::join(|| self.reduce(lo, mid, parts / 2), || self.reduce(mid, hi, parts / 2));
        self.merge(left, right, mid)
    }

    fn leaf(&self, lo: usize, hi: usize) -> RangeState {
        let prefix = &self.edges[..hi];
        let map = NeighborhoodMap::from_edges(self.vertices.iter().copied(), prefix.iter().copied(), self.repr)
            .expect("edges of a valid graph");
        let mut sweep = BackwardSweep::new(map);
        let mut outcomes = vec![Outcome::Removed; hi - lo];
        for i in (lo..hi).rev() {
            let e = &self.edges[i];
            let (a, b) = self.ix(&sweep, e);
            outcomes[i - lo] = sweep.process(a, b, e.t, e.t);
        }
        let stats = std::mem::take(&mut sweep.stats);
        RangeState { sweep, outcomes, stats }
    }

    fn merge(&self, left: RangeState, mut right: RangeState, mid: usize) -> RangeState {
        let lo = mid - left.outcomes.len();
        let t_mid = self.edges[mid].t;
        let sweep = &mut right.sweep;
        let mut dropped = Vec::new();
        for (i, outcome) in (lo..mid).zip(&left.outcomes) {
            match outcome {
                Outcome::Kept(t) => {
                    let (a, b) = self.ix(sweep, &self.edges[i]);
                    sweep.map.set_grade_ix(a, b, *t);
                }
                Outcome::Removed => dropped.push(i),
            }
        }
        let mut outcomes = left.outcomes;
        for &i in dropped.iter().rev() {
            let (a, b) = self.ix(sweep, &self.edges[i]);
            outcomes[i - lo] = sweep.process(a, b, t_mid, t_mid);
        }
        outcomes.extend(right.outcomes);
        let mut stats = left.stats;
        stats += right.stats;
        stats += std::mem::take(&mut sweep.stats);
        RangeState { sweep: right.sweep, outcomes, stats }
    }

    fn ix(&self, sweep: &BackwardSweep, e: &FilteredEdge) -> (u32, u32) {
        (sweep.map.index_of(e.u).unwrap(), sweep.map.index_of(e.v).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::backward_collapse;

    #[test]
    fn plan_halves_recursively() {
        let plan = PartitionPlan::new(10, 4).unwrap();
        let ranges: Vec<_> = plan.ranges().collect();
        assert_eq!(ranges, vec![0..2, 2..5, 5..7, 7..10]);
        assert_eq!(plan.parts(), 4);
        assert!(PartitionPlan::new(10, 3).is_err());
    }

    #[test]
    fn ties_across_a_split_are_rejected() {
        let g = FilteredGraph::from_triples(&[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 2.0), (2, 3, 3.0)]).unwrap();
        assert!(matches!(
            parallel_backward_collapse(&g, 2),
            Err(ParallelError::TieAcrossSplit { left: 1, right: 2, .. })
        ));
        assert!(parallel_backward_collapse(&g, 1).is_ok());
    }

    #[test]
    fn parts_follow_threads_and_size() {
        assert_eq!(parts_for_threads(1, 1 << 20), 1);
        assert_eq!(parts_for_threads(3, 1 << 20), 4);
        assert_eq!(parts_for_threads(8, 3000), 2);
        assert_eq!(parts_for_threads(8, 10), 1);
    }

    #[test]
    fn matches_sequential_on_a_wheel() {
        let mut t = Vec::new();
        let mut grade = 1.0;
        for i in 1..9u32 {
            t.push((0, i, grade));
            grade += 1.0;
        }
        for i in 1..9u32 {
            t.push((i, i % 8 + 1, grade));
            grade += 1.0;
        }
        let g = FilteredGraph::from_triples(&t).unwrap();
        let seq = backward_collapse(&g);
        for parts in [1, 2, 4, 8] {
            let par = parallel_backward_collapse(&g, parts).unwrap();
            assert_eq!(par.kept(), seq.kept());
            assert_eq!(par.removed, seq.removed);
        }
    }
}
