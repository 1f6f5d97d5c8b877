//! Zigzag flag filtrations, where edges can disappear as well as appear,
//! and their reduction by cancelling, shifting and trimming dominated edges.
//!
//! At each grade `t` the inclusions happen first, giving the graph `G_t`;
//! the removals of that grade follow, giving the intermediate graph `G_t'`.
//! Vertices are never removed.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::grade::{Grade, VertexId};
use crate::graph::FilteredGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Inclusion,
    Removal,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Inclusion => "+",
            Direction::Removal => "-",
        })
    }
}

/// Insertion or removal of the edge `uv` (`u < v`) at `grade`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZigzagEvent {
    pub u: VertexId,
    pub v: VertexId,
    pub grade: Grade,
    pub direction: Direction,
}

impl ZigzagEvent {
    pub fn new(a: impl Into<VertexId>, b: impl Into<VertexId>, grade: Grade, direction: Direction) -> Result<Self, ZigzagError> {
        let (a, b) = (a.into(), b.into());
        if a == b {
            return Err(ZigzagError::SelfLoop(a));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(ZigzagEvent { u, v, grade, direction })
    }

    pub fn inclusion(a: impl Into<VertexId>, b: impl Into<VertexId>, grade: Grade) -> Result<Self, ZigzagError> {
        Self::new(a, b, grade, Direction::Inclusion)
    }

    pub fn removal(a: impl Into<VertexId>, b: impl Into<VertexId>, grade: Grade) -> Result<Self, ZigzagError> {
        Self::new(a, b, grade, Direction::Removal)
    }

    /// Canonical order: by grade, inclusions before removals, then by edge.
    pub fn key(&self) -> (Grade, Direction, VertexId, VertexId) {
        (self.grade, self.direction, self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZigzagError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("non-finite grade {grade} on edge ({u}, {v})")]
    NonFiniteEvent { u: VertexId, v: VertexId, grade: Grade },
    #[error("non-finite birth grade {1} for vertex {0}")]
    NonFiniteBirth(VertexId, Grade),
    #[error("edge ({u}, {v}) inserted at {grade} while already present")]
    AlreadyPresent { u: VertexId, v: VertexId, grade: Grade },
    #[error("edge ({u}, {v}) removed at {grade} while absent")]
    NotPresent { u: VertexId, v: VertexId, grade: Grade },
    #[error("vertex {vertex} born at {birth} after event on edge ({u}, {v}) at {grade}")]
    BirthAfterEvent { vertex: VertexId, birth: Grade, u: VertexId, v: VertexId, grade: Grade },
    #[error("number of passes must be at least 1")]
    ZeroPasses,
}

/// A validated zigzag sequence of flag complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagFiltration {
    births: BTreeMap<VertexId, Grade>,
    events: Vec<ZigzagEvent>,
}

impl ZigzagFiltration {
    /// Sorts the events canonically and checks that every edge alternates
    /// between insertion and removal, starting with an insertion. Vertices
    /// without an explicit birth are born at their first event.
    pub fn new(
        births: impl IntoIterator<Item = (VertexId, Grade)>,
        events: impl IntoIterator<Item = ZigzagEvent>,
    ) -> Result<Self, ZigzagError> {
        let mut births: BTreeMap<VertexId, Grade> = births.into_iter().collect();
        for (&v, &b) in &births {
            if !b.is_finite() {
                return Err(ZigzagError::NonFiniteBirth(v, b));
            }
        }
        let mut events: Vec<ZigzagEvent> = events.into_iter().collect();
        events.sort_by_key(ZigzagEvent::key);
        let mut present = HashSet::new();
        for e in &events {
            if !e.grade.is_finite() {
                return Err(ZigzagError::NonFiniteEvent { u: e.u, v: e.v, grade: e.grade });
            }
            for x in [e.u, e.v] {
                let birth = *births.entry(x).or_insert(e.grade);
                if birth > e.grade {
                    return Err(ZigzagError::BirthAfterEvent { vertex: x, birth, u: e.u, v: e.v, grade: e.grade });
                }
            }
            let fresh = match e.direction {
                Direction::Inclusion => present.insert((e.u, e.v)),
                Direction::Removal => present.remove(&(e.u, e.v)),
            };
            if !fresh {
                return Err(match e.direction {
                    Direction::Inclusion => ZigzagError::AlreadyPresent { u: e.u, v: e.v, grade: e.grade },
                    Direction::Removal => ZigzagError::NotPresent { u: e.u, v: e.v, grade: e.grade },
                });
            }
        }
        Ok(ZigzagFiltration { births, events })
    }

    /// The monotone zigzag made of the inclusions of `g`.
    pub fn from_graph(g: &FilteredGraph) -> Self {
        let events = g.edges().iter().map(|e| ZigzagEvent { u: e.u, v: e.v, grade: e.t, direction: Direction::Inclusion });
        Self::new(g.births().iter().map(|(&v, &b)| (v, b)), events).expect("a valid graph is a valid zigzag")
    }

    /// The graph of a zigzag without removals.
    pub fn to_graph(&self) -> Option<FilteredGraph> {
        if !self.is_monotone() {
            return None;
        }
        let edges = self.events.iter().map(|e| crate::graph::FilteredEdge { u: e.u, v: e.v, t: e.grade });
        Some(FilteredGraph::new(self.births.iter().map(|(&v, &b)| (v, b)), edges).expect("validated"))
    }

    pub fn births(&self) -> &BTreeMap<VertexId, Grade> {
        &self.births
    }

    pub fn events(&self) -> &[ZigzagEvent] {
        &self.events
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.events.iter().all(|e| e.direction == Direction::Inclusion)
    }

    /// Sorted distinct grades of all events and vertex births.
    pub fn grades(&self) -> Vec<Grade> {
        let set: BTreeSet<Grade> = self.events.iter().map(|e| e.grade).chain(self.births.values().copied()).collect();
        set.into_iter().collect()
    }
}

/// An inclusion and the removal it is paired with, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EventPair {
    pub u: VertexId,
    pub v: VertexId,
    pub inclusion: Grade,
    pub removal: Option<Grade>,
}

/// Pairs every inclusion with the next removal of the same edge, in the
/// order of the inclusions.
pub fn pair_events(z: &ZigzagFiltration) -> Vec<EventPair> {
    let mut open: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let mut pairs = Vec::new();
    for e in z.events() {
        match e.direction {
            Direction::Inclusion => {
                open.insert((e.u, e.v), pairs.len());
                pairs.push(EventPair { u: e.u, v: e.v, inclusion: e.grade, removal: None });
            }
            Direction::Removal => {
                let i = open.remove(&(e.u, e.v)).expect("validated");
                pairs[i].removal = Some(e.grade);
            }
        }
    }
    pairs
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ZigzagStats {
    pub passes: usize,
    pub domination_checks: u64,
    pub shifts: u64,
    pub cancellations: u64,
    pub trims: u64,
    /// Shifts across a removal step declined because the edge was no longer
    /// dominated after the removals.
    pub refused_shifts: u64,
}

#[derive(Debug, Clone)]
pub struct ZigzagResult {
    pub filtration: ZigzagFiltration,
    pub stats: ZigzagStats,
}

/// Alternates a backward pass over the inclusions with a forward pass over
/// the removals, at most `passes` times and until a pass changes nothing.
pub fn zigzag_collapse(z: &ZigzagFiltration, passes: usize) -> Result<ZigzagResult, ZigzagError> {
    if passes == 0 {
        return Err(ZigzagError::ZeroPasses);
    }
    let grid = z.grades();
    let n = grid.len();
    let ix = |g: Grade| grid.binary_search(&g).expect("grade on grid");
    let mut ivs: Vec<Span> = pair_events(z)
        .into_iter()
        .map(|p| Span { u: p.u.0, v: p.v.0, inc: ix(p.inclusion), rem: p.removal.map(ix), pinned: false })
        .collect();
    let mut stats = ZigzagStats::default();
    while stats.passes < passes {
        stats.passes += 1;
        let mut timeline = Timeline::new(n, ivs);
        let mut ops = timeline.pass(&mut stats);
        let mut mirror = Timeline::new(n, timeline.into_spans().into_iter().map(|s| s.mirrored(n)).collect());
        ops += mirror.pass(&mut stats);
        ivs = mirror.into_spans().into_iter().map(|s| s.mirrored(n)).collect();
        if ops == 0 {
            break;
        }
    }
    let mut events = Vec::new();
    for s in ivs {
        let (u, v) = (VertexId(s.u), VertexId(s.v));
        events.push(ZigzagEvent { u, v, grade: grid[s.inc], direction: Direction::Inclusion });
        if let Some(r) = s.rem {
            events.push(ZigzagEvent { u, v, grade: grid[r], direction: Direction::Removal });
        }
    }
    let filtration = ZigzagFiltration::new(z.births().iter().map(|(&v, &b)| (v, b)), events)
        .expect("reduction keeps the zigzag consistent");
    Ok(ZigzagResult { filtration, stats })
}

/// Lifetime of one edge on grid indices. Present in `G_k` for
/// `inc <= k <= rem` and in `G_k'` for `inc <= k < rem`.
#[derive(Debug, Clone, Copy)]
struct Span {
    u: u32,
    v: u32,
    inc: usize,
    rem: Option<usize>,
    /// Inclusion that stands for "present at the very start" on a mirrored
    /// timeline; it cannot move.
    pinned: bool,
}

impl Span {
    fn present(&self, k: usize, primed: bool) -> bool {
        self.inc <= k
            && match self.rem {
                None => true,
                Some(r) if primed => k < r,
                Some(r) => k <= r,
            }
    }

    /// Same lifetime on the reversed timeline, where `G_k` becomes
    /// `G_{n-1-k}` and `G_k'` becomes `G_{n-2-k}'`. An edge alive at the end
    /// gets a pinned inclusion at the start, and the mapping is an involution.
    fn mirrored(self, n: usize) -> Span {
        match (self.pinned, self.rem) {
            (false, None) => Span { inc: 0, rem: Some(n - 1 - self.inc), pinned: true, ..self },
            (true, Some(r)) => Span { inc: n - 1 - r, rem: None, pinned: false, ..self },
            (false, Some(r)) => Span { inc: n - 1 - r, rem: Some(n - 1 - self.inc), ..self },
            (true, None) => unreachable!("pinned spans always end"),
        }
    }
}

struct Timeline {
    n: usize,
    spans: Vec<Option<Span>>,
    by_pair: HashMap<(u32, u32), Vec<usize>>,
    nbrs: HashMap<u32, BTreeSet<u32>>,
    removals_at: Vec<usize>,
}

impl Timeline {
    fn new(n: usize, spans: Vec<Span>) -> Self {
        let mut by_pair: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
        let mut nbrs: HashMap<u32, BTreeSet<u32>> = HashMap::new();
        let mut removals_at = vec![0; n];
        for (i, s) in spans.iter().enumerate() {
            by_pair.entry((s.u, s.v)).or_default().push(i);
            nbrs.entry(s.u).or_default().insert(s.v);
            nbrs.entry(s.v).or_default().insert(s.u);
            if let Some(r) = s.rem {
                removals_at[r] += 1;
            }
        }
        Timeline { n, spans: spans.into_iter().map(Some).collect(), by_pair, nbrs, removals_at }
    }

    fn into_spans(self) -> Vec<Span> {
        self.spans.into_iter().flatten().collect()
    }

    fn edge_present(&self, a: u32, b: u32, k: usize, primed: bool) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.by_pair
            .get(&key)
            .is_some_and(|ids| ids.iter().any(|&i| self.spans[i].is_some_and(|s| s.present(k, primed))))
    }

    fn dominated(&self, u: u32, v: u32, k: usize, primed: bool, stats: &mut ZigzagStats) -> bool {
        stats.domination_checks += 1;
        let nv = &self.nbrs[&v];
        let common: Vec<u32> = self.nbrs[&u]
            .iter()
            .copied()
            .filter(|w| nv.contains(w) && self.edge_present(u, *w, k, primed) && self.edge_present(v, *w, k, primed))
            .collect();
        common
            .iter()
            .any(|&w| common.iter().all(|&x| x == w || self.edge_present(w, x, k, primed)))
    }

    /// Whether an edge at `u` or `v` other than `uv` is inserted at `k`.
    fn incident_inclusion_at(&self, u: u32, v: u32, k: usize) -> bool {
        [(u, v), (v, u)].iter().any(|&(a, other)| {
            self.nbrs[&a].iter().any(|&w| {
                w != other
                    && self.by_pair[&(a.min(w), a.max(w))]
                        .iter()
                        .any(|&i| self.spans[i].is_some_and(|s| s.inc == k))
            })
        })
    }

    fn delete(&mut self, id: usize) {
        let s = self.spans[id].take().expect("live span");
        if let Some(r) = s.rem {
            self.removals_at[r] -= 1;
        }
        let ids = self.by_pair.get_mut(&(s.u, s.v)).unwrap();
        ids.retain(|&i| i != id);
        if ids.is_empty() {
            self.by_pair.remove(&(s.u, s.v));
            self.nbrs.get_mut(&s.u).unwrap().remove(&s.v);
            self.nbrs.get_mut(&s.v).unwrap().remove(&s.u);
        }
    }

    /// Visits the movable inclusions from last to first and pushes each one
    /// as late as it legally goes. Returns the number of operations.
    fn pass(&mut self, stats: &mut ZigzagStats) -> u64 {
        let mut order: Vec<(usize, u32, u32, usize)> = self
            .spans
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.filter(|s| !s.pinned).map(|s| (s.inc, s.u, s.v, i)))
            .collect();
        order.sort_unstable_by(|a, b| b.cmp(a));
        order.into_iter().map(|(.., id)| self.push_inclusion(id, stats)).sum()
    }

    fn push_inclusion(&mut self, id: usize, stats: &mut ZigzagStats) -> u64 {
        let mut ops = 0;
        let mut known_dominated = false;
        loop {
            let s = self.spans[id].expect("live span");
            let i = s.inc;
            if !known_dominated && !self.dominated(s.u, s.v, i, false, stats) {
                return ops;
            }
            if s.rem == Some(i) {
                self.delete(id);
                stats.cancellations += 1;
                return ops + 1;
            }
            if self.removals_at[i] > 0 && !self.dominated(s.u, s.v, i, true, stats) {
                stats.refused_shifts += 1;
                return ops;
            }
            if i + 1 == self.n {
                self.delete(id);
                stats.trims += 1;
                return ops + 1;
            }
            self.spans[id].as_mut().unwrap().inc = i + 1;
            stats.shifts += 1;
            ops += 1;
            known_dominated = !self.incident_inclusion_at(s.u, s.v, i + 1);
        }
    }
}
