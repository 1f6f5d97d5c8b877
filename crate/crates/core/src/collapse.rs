//! Sequential reduction drivers: the backward sweep, the forward (streaming)
//! sweep, and repeated application until the edge count stops shrinking.
//!
//! Every driver only ever performs three diagram-preserving moves on the
//! edge sequence: reordering edges of equal grade, delaying a dominated edge
//! to a later grade, and dropping a dominated edge that would be inserted
//! last. The flag filtration of the output therefore has the same
//! persistence diagram as the input.

use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::ops::AddAssign;

use crate::grade::{Grade, VertexId};
use crate::graph::{FilteredEdge, FilteredGraph, GraphError};
use crate::neighborhood::{NeighborhoodMap, Representation, Scratch};

/// Best-effort work counters. Not part of any equality contract.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CollapseStats {
    pub domination_checks: u64,
    pub shifts: u64,
    pub trims: u64,
}

impl AddAssign for CollapseStats {
    fn add_assign(&mut self, rhs: Self) {
        self.domination_checks += rhs.domination_checks;
        self.shifts += rhs.shifts;
        self.trims += rhs.trims;
    }
}

/// Output of a reduction: the surviving graph (same vertex births, new edge
/// grades) and the dropped edges at their original grades.
#[derive(Debug, Clone)]
pub struct CollapseResult {
    pub graph: FilteredGraph,
    pub removed: Vec<FilteredEdge>,
    pub stats: CollapseStats,
}

impl CollapseResult {
    /// Surviving edges, sorted by `(t, u, v)`.
    pub fn kept(&self) -> &[FilteredEdge] {
        self.graph.edges()
    }

    pub(crate) fn assemble(
        input: &FilteredGraph,
        kept: Vec<FilteredEdge>,
        mut removed: Vec<FilteredEdge>,
        stats: CollapseStats,
    ) -> Self {
        removed.sort_unstable();
        let graph = input
            .with_edges(kept)
            .expect("grades only increase, so births stay valid");
        CollapseResult { graph, removed, stats }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    #[default]
    Backward,
    Forward,
}

/// Fate of one edge after the backward treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Kept(Grade),
    Removed,
}

/// Mutable state of a backward sweep: the neighborhood map with current
/// grades plus scratch buffers.
pub(crate) struct BackwardSweep {
    pub(crate) map: NeighborhoodMap,
    scratch: Scratch,
    present: Vec<u32>,
    future: Vec<(Grade, u32)>,
    added: Vec<u32>,
    merged: Vec<u32>,
    pub(crate) stats: CollapseStats,
}

impl BackwardSweep {
    pub(crate) fn new(map: NeighborhoodMap) -> Self {
        let scratch = Scratch::new(&map);
        BackwardSweep {
            map,
            scratch,
            present: Vec::new(),
            future: Vec::new(),
            added: Vec::new(),
            merged: Vec::new(),
            stats: CollapseStats::default(),
        }
    }

    /// Treats edge `ab` as the last edge inserted at grade `check_from` and
    /// delays it while it stays dominated. If it is not dominated at
    /// `check_from` it keeps grade `fallback`; after a first successful check
    /// it follows the usual shifting rule. The map is updated in place.
    pub(crate) fn process(&mut self, a: u32, b: u32, check_from: Grade, fallback: Grade) -> Outcome {
        let map = &self.map;
        let mut t = check_from;
        map.common_neighbors_ix(a, b, t, &mut self.present, &mut self.future, &mut self.scratch);
        let mut next_future = 0;
        let mut dominator: Option<u32> = None;
        let mut first = true;
        loop {
            self.stats.domination_checks += 1;
            let witness = match dominator {
                Some(w) if map.still_dominates_ix(w, &self.added, t) => Some(w),
                _ => map.find_dominator_ix(&self.present, t),
            };
            let Some(w) = witness else {
                let grade = if first { fallback } else { t };
                self.map.set_grade_ix(a, b, grade);
                return Outcome::Kept(grade);
            };
            first = false;
            dominator = Some(w);
            if next_future == self.future.len() {
                self.map.remove_ix(a, b);
                self.stats.trims += 1;
                return Outcome::Removed;
            }
            // Jump to the next grade at which a common neighbor appears.
            t = self.future[next_future].0;
            self.added.clear();
            while next_future < self.future.len() && self.future[next_future].0 == t {
                self.added.push(self.future[next_future].1);
                next_future += 1;
            }
            self.added.sort_unstable();
            merge_sorted(&self.present, &self.added, &mut self.merged);
            std::mem::swap(&mut self.present, &mut self.merged);
            self.stats.shifts += 1;
        }
    }
}

fn merge_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    out.reserve(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Backward reduction with the default dense representation.
pub fn backward_collapse(g: &FilteredGraph) -> CollapseResult {
    backward_collapse_with(g, Representation::default())
}

/// Processes edges by non-increasing grade (equal grades in reverse
/// `(t, u, v)` order); each edge is delayed while dominated and dropped if it
/// stays dominated with no later common neighbor.
pub fn backward_collapse_with(g: &FilteredGraph, repr: Representation) -> CollapseResult {
    let mut sweep = BackwardSweep::new(NeighborhoodMap::from_graph(g, repr));
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for e in g.edges().iter().rev() {
        let a = sweep.map.index_of(e.u).unwrap();
        let b = sweep.map.index_of(e.v).unwrap();
        match sweep.process(a, b, e.t, e.t) {
            Outcome::Kept(t) => kept.push(e.with_grade(t)),
            Outcome::Removed => removed.push(*e),
        }
    }
    CollapseResult::assemble(g, kept, removed, sweep.stats)
}

pub fn forward_collapse(g: &FilteredGraph) -> CollapseResult {
    forward_collapse_with(g, Representation::default())
}

/// Forward reduction of `g`, streaming its edges in `(t, u, v)` order.
pub fn forward_collapse_with(g: &FilteredGraph, repr: Representation) -> CollapseResult {
    let mut stream = ForwardCollapser::new(g.births().clone(), repr);
    for e in g.edges() {
        stream.push(*e).expect("edges of a valid graph form a valid stream");
    }
    stream.finish()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StreamError {
    #[error("edge ({u}, {v}) at {grade} arrives after grade {last}")]
    OutOfOrder {
        u: VertexId,
        v: VertexId,
        grade: Grade,
        last: Grade,
    },
    #[error("vertex {0} was not declared")]
    UnknownVertex(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

struct Pending {
    a: u32,
    b: u32,
    edge: FilteredEdge,
    dominator: u32,
    dirty: bool,
}

/// Streaming forward reduction. Edges are fed by non-decreasing grade;
/// among equal grades the arrival order is the insertion order, which the
/// result depends on.
///
/// A dominated edge joins a pending train that keeps its arrival order.
/// When a critical edge is emitted, the train crosses it from back to front:
/// a pending edge sees every emitted edge and the pending edges ahead of it,
/// and one that is no longer dominated is emitted at the current grade,
/// which the edges behind it must cross in turn. Edges still pending at the
/// end are dropped. Emitted edges are final as soon as they appear in
/// [`ForwardCollapser::emitted`].
pub struct ForwardCollapser {
    births: BTreeMap<VertexId, Grade>,
    // Grades in this map encode visibility: emitted edges are at -inf and
    // the pending edge with arrival index `k` is at `k`.
    map: NeighborhoodMap,
    scratch: Scratch,
    present: Vec<u32>,
    future: Vec<(Grade, u32)>,
    pending: HashMap<usize, Pending>,
    incident: Vec<Vec<usize>>,
    dirty: BinaryHeap<usize>,
    kept: Vec<FilteredEdge>,
    arrivals: usize,
    last: Option<Grade>,
    stats: CollapseStats,
}

fn slot(k: usize) -> Grade {
    Grade::from_f64(k as f64)
}

/// Visibility threshold for pending edge `k`: emitted edges and pending
/// edges that arrived earlier.
fn view(k: usize) -> Grade {
    Grade::from_f64(k as f64 - 0.5)
}

impl ForwardCollapser {
    pub fn new(births: BTreeMap<VertexId, Grade>, repr: Representation) -> Self {
        let map = NeighborhoodMap::empty(births.keys().copied(), repr);
        let scratch = Scratch::new(&map);
        let incident = vec![Vec::new(); map.num_vertices()];
        ForwardCollapser {
            births,
            map,
            scratch,
            present: Vec::new(),
            future: Vec::new(),
            pending: HashMap::new(),
            incident,
            dirty: BinaryHeap::new(),
            kept: Vec::new(),
            arrivals: 0,
            last: None,
            stats: CollapseStats::default(),
        }
    }

    pub fn push(&mut self, e: FilteredEdge) -> Result<(), StreamError> {
        if let Some(last) = self.last {
            if e.t < last {
                return Err(StreamError::OutOfOrder { u: e.u, v: e.v, grade: e.t, last });
            }
        }
        let ix = |v: VertexId| self.map.index_of(v).ok_or(StreamError::UnknownVertex(v));
        let (a, b) = (ix(e.u)?, ix(e.v)?);
        for x in [e.u, e.v] {
            let birth = self.births[&x];
            if birth > e.t {
                let (u, v, grade) = (e.u, e.v, e.t);
                return Err(GraphError::BirthAfterEdge { vertex: x, birth, u, v, grade }.into());
            }
        }
        if self.map.grade_ix(a, b).is_some() {
            return Err(GraphError::DuplicateEdge(e.u, e.v).into());
        }
        self.last = Some(e.t);
        let k = self.arrivals;
        self.arrivals += 1;

        self.map.common_neighbors_ix(a, b, view(k), &mut self.present, &mut self.future, &mut self.scratch);
        self.stats.domination_checks += 1;
        self.map.insert_ix(a, b, slot(k));
        if let Some(w) = self.map.find_dominator_ix(&self.present, view(k)) {
            self.incident[a as usize].push(k);
            self.incident[b as usize].push(k);
            let f = Pending { a, b, edge: e, dominator: w, dirty: false };
            self.pending.insert(k, f);
            self.stats.shifts += 1;
            return Ok(());
        }
        self.emit(a, b, e, k);
        while let Some(k) = self.dirty.pop() {
            let f = self.pending.get_mut(&k).unwrap();
            f.dirty = false;
            let (fa, fb, edge) = (f.a, f.b, f.edge);
            self.map
                .common_neighbors_ix(fa, fb, view(k), &mut self.present, &mut self.future, &mut self.scratch);
            self.stats.domination_checks += 1;
            match self.map.find_dominator_ix(&self.present, view(k)) {
                Some(w) => self.pending.get_mut(&k).unwrap().dominator = w,
                None => {
                    self.pending.remove(&k);
                    self.emit(fa, fb, edge.with_grade(e.t), k);
                }
            }
        }
        Ok(())
    }

    /// Makes `ab` (arrival index `k`) visible to everyone and queues the
    /// pending edges behind it whose neighborhood it enlarges.
    fn emit(&mut self, a: u32, b: u32, e: FilteredEdge, k: usize) {
        self.map.set_grade_ix(a, b, Grade::NEG_INFINITY);
        self.kept.push(e);
        for (p, q) in [(a, b), (b, a)] {
            let list = &mut self.incident[p as usize];
            list.retain(|j| self.pending.contains_key(j));
            for &j in list.iter() {
                if j > k {
                    continue;
                }
                let f = self.pending.get_mut(&j).unwrap();
                if f.dirty {
                    continue;
                }
                let z = if f.a == p { f.b } else { f.a };
                let seen = |x: u32, y: u32| matches!(self.map.grade_ix(x, y), Some(g) if g <= view(j));
                // `q` is a new common neighbor of `f`; its dominator must see it.
                if z == q || !seen(z, q) || seen(f.dominator, q) {
                    continue;
                }
                f.dirty = true;
                self.dirty.push(j);
            }
        }
    }

    /// Edges emitted so far, in emission order.
    pub fn emitted(&self) -> &[FilteredEdge] {
        &self.kept
    }

    /// Number of edges currently held back in the train.
    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    /// Ends the stream, dropping every edge still in the train.
    pub fn finish(self) -> CollapseResult {
        let mut removed: Vec<FilteredEdge> = self.pending.values().map(|f| f.edge).collect();
        let mut stats = self.stats;
        stats.trims = removed.len() as u64;
        let mut kept = self.kept;
        kept.sort_unstable();
        removed.sort_unstable();
        let graph = FilteredGraph::new(self.births, kept).expect("stream was validated on push");
        CollapseResult { graph, removed, stats }
    }
}

/// Runs one round of the chosen algorithm.
pub fn collapse_once(g: &FilteredGraph, algorithm: Algorithm, repr: Representation) -> CollapseResult {
    match algorithm {
        Algorithm::Backward => backward_collapse_with(g, repr),
        Algorithm::Forward => forward_collapse_with(g, repr),
    }
}

/// Result of repeated reduction rounds.
#[derive(Debug, Clone)]
pub struct FixpointResult {
    pub result: CollapseResult,
    /// Edge count of the input followed by the count after each round. The
    /// sequence never increases; rounds that only move grades repeat the
    /// previous count.
    pub round_sizes: Vec<usize>,
}

impl FixpointResult {
    pub fn rounds(&self) -> usize {
        self.round_sizes.len() - 1
    }
}

/// Applies the algorithm to its own output until a round changes nothing
/// (no removal and no grade shift) or `max_rounds` rounds have run.
pub fn collapse_to_fixpoint(
    g: &FilteredGraph,
    algorithm: Algorithm,
    max_rounds: usize,
    repr: Representation,
) -> FixpointResult {
    assert!(max_rounds >= 1, "max_rounds must be at least 1");
    let mut sizes = vec![g.num_edges()];
    let mut current = g.clone();
    let mut stats = CollapseStats::default();
    for _ in 0..max_rounds {
        let round = collapse_once(&current, algorithm, repr);
        stats += round.stats;
        sizes.push(round.graph.num_edges());
        let unchanged = round.graph.edges() == current.edges();
        current = round.graph;
        if unchanged {
            break;
        }
    }
    let survivors: HashMap<(VertexId, VertexId), Grade> =
        current.edges().iter().map(|e| (e.pair(), e.t)).collect();
    let removed: Vec<FilteredEdge> = g
        .edges()
        .iter()
        .filter(|e| !survivors.contains_key(&e.pair()))
        .copied()
        .collect();
    let result = CollapseResult::assemble(g, current.edges().to_vec(), removed, stats);
    FixpointResult { result, round_sizes: sizes }
}

/// For every original edge, its grade in `result` (`None` if removed).
pub fn grade_changes(input: &FilteredGraph, result: &CollapseResult) -> BTreeMap<(VertexId, VertexId), Option<Grade>> {
    let kept: HashMap<_, _> = result.kept().iter().map(|e| (e.pair(), e.t)).collect();
    input
        .edges()
        .iter()
        .map(|e| (e.pair(), kept.get(&e.pair()).copied()))
        .collect()
}
