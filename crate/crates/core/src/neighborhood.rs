//! The neighborhood map and the edge-domination predicate.
//!
//! For every vertex `u` the map stores the neighbors of `u` together with the
//! *current* grade of the connecting edge. All collapse drivers mutate these
//! grades as edges are shifted, so domination is always evaluated against the
//! graph `G_t` made of the edges whose current grade is at most `t`.
//!
//! Internally vertices are renumbered to dense local indices (in increasing
//! [`VertexId`] order), and every per-vertex list is kept sorted by neighbor.

use crate::grade::{Grade, VertexId};
use crate::graph::{FilteredEdge, FilteredGraph, GraphError};

/// How membership tests inside a domination check are answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representation {
    /// Vertex-indexed scratch tables; fastest on dense inputs.
    #[default]
    Dense,
    /// Sorted merges only; no `O(n)` scratch memory.
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NeighborhoodError {
    #[error("edge ({0}, {1}) is not in the neighborhood map")]
    MissingEdge(VertexId, VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `N_t(e)` and the future neighbors `F_t(e)` of an edge.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeNeighborhood {
    /// Common neighbors reachable through edges of grade `<= t`, ascending.
    pub present: Vec<VertexId>,
    /// Remaining common neighbors with the grade at which they join, sorted
    /// by `(grade, vertex)`.
    pub future: Vec<(VertexId, Grade)>,
}

/// Symmetric per-vertex map `neighbor -> current edge grade`.
#[derive(Debug, Clone)]
pub struct NeighborhoodMap {
    ids: Vec<VertexId>,
    adj: Vec<Vec<(u32, Grade)>>,
    repr: Representation,
}

impl NeighborhoodMap {
    pub fn from_graph(g: &FilteredGraph, repr: Representation) -> Self {
        // A validated graph has no duplicate edges.
        Self::from_edges(g.vertices(), g.edges().iter().copied(), repr)
            .expect("validated graph has unique edges")
    }

    /// Builds a map over `vertices` (endpoints are added as needed).
    /// Fails on a repeated vertex pair.
    pub fn from_edges(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = FilteredEdge>,
        repr: Representation,
    ) -> Result<Self, GraphError> {
        let edges: Vec<FilteredEdge> = edges.into_iter().collect();
        let mut ids: Vec<VertexId> = vertices.into_iter().collect();
        ids.extend(edges.iter().flat_map(|e| [e.u, e.v]));
        ids.sort_unstable();
        ids.dedup();
        let mut map = NeighborhoodMap {
            adj: vec![Vec::new(); ids.len()],
            ids,
            repr,
        };
        for e in &edges {
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
            let (a, b) = (map.index_of(e.u).unwrap(), map.index_of(e.v).unwrap());
            map.adj[a as usize].push((b, e.t));
            map.adj[b as usize].push((a, e.t));
        }
        for (a, list) in map.adj.iter_mut().enumerate() {
            list.sort_unstable_by_key(|&(x, _)| x);
            if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
                let (x, y) = (map.ids[a], map.ids[w[0].0 as usize]);
                return Err(GraphError::DuplicateEdge(x.min(y), x.max(y)));
            }
        }
        Ok(map)
    }

    /// An edgeless map over the given vertices.
    pub fn empty(vertices: impl IntoIterator<Item = VertexId>, repr: Representation) -> Self {
        Self::from_edges(vertices, std::iter::empty(), repr).expect("no edges")
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn grade(&self, u: VertexId, v: VertexId) -> Option<Grade> {
        self.grade_ix(self.index_of(u)?, self.index_of(v)?)
    }

    /// Neighbors of `u` in increasing id order, with current grades.
    pub fn neighbors(&self, u: VertexId) -> impl Iterator<Item = (VertexId, Grade)> + '_ {
        let list = match self.index_of(u) {
            Some(a) => &self.adj[a as usize][..],
            None => &[][..],
        };
        list.iter().map(move |&(x, t)| (self.ids[x as usize], t))
    }

    /// All edges with their current grades, sorted by `(t, u, v)`.
    pub fn edges(&self) -> Vec<FilteredEdge> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (a, list) in self.adj.iter().enumerate() {
            for &(b, t) in list {
                if (a as u32) < b {
                    out.push(FilteredEdge {
                        u: self.ids[a],
                        v: self.ids[b as usize],
                        t,
                    });
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Sets the grade of an existing edge on both sides.
    pub fn set_grade(&mut self, u: VertexId, v: VertexId, t: Grade) -> Result<(), NeighborhoodError> {
        let (a, b) = self.pair_ix(u, v)?;
        if self.grade_ix(a, b).is_none() {
            return Err(NeighborhoodError::MissingEdge(u, v));
        }
        self.set_grade_ix(a, b, t);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<Grade, NeighborhoodError> {
        let (a, b) = self.pair_ix(u, v)?;
        self.remove_ix(a, b).ok_or(NeighborhoodError::MissingEdge(u, v))
    }

    /// Inserts a new edge; an existing edge gets its grade replaced.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, t: Grade) -> Result<(), NeighborhoodError> {
        let (a, b) = self.pair_ix(u, v)?;
        self.insert_ix(a, b, t);
        Ok(())
    }

    /// `N_t(uv)` and `F_t(uv)` for an edge present in the map.
    pub fn edge_neighborhood(&self, u: VertexId, v: VertexId, t: Grade) -> Result<EdgeNeighborhood, NeighborhoodError> {
        let (a, b) = self.edge_ix(u, v)?;
        let mut scratch = Scratch::new(self);
        let mut present = Vec::new();
        let mut future = Vec::new();
        self.common_neighbors_ix(a, b, t, &mut present, &mut future, &mut scratch);
        Ok(EdgeNeighborhood {
            present: present.iter().map(|&x| self.ids[x as usize]).collect(),
            future: future.iter().map(|&(g, x)| (self.ids[x as usize], g)).collect(),
        })
    }

    /// Smallest vertex `w` with `N_t(uv) ⊆ N_t[w]`, if any. An edge without
    /// common neighbors at `t` is never dominated.
    pub fn is_dominated(&self, u: VertexId, v: VertexId, t: Grade) -> Result<Option<VertexId>, NeighborhoodError> {
        let (a, b) = self.edge_ix(u, v)?;
        let mut scratch = Scratch::new(self);
        let mut present = Vec::new();
        let mut future = Vec::new();
        self.common_neighbors_ix(a, b, t, &mut present, &mut future, &mut scratch);
        Ok(self
            .find_dominator_ix(&present, t)
            .map(|w| self.ids[w as usize]))
    }

    /// True when every entry has a mirror entry with the same grade.
    pub fn is_symmetric(&self) -> bool {
        self.adj.iter().enumerate().all(|(a, list)| {
            list.iter()
                .all(|&(b, t)| self.grade_ix(b, a as u32) == Some(t))
        })
    }

    pub(crate) fn index_of(&self, v: VertexId) -> Option<u32> {
        self.ids.binary_search(&v).ok().map(|i| i as u32)
    }

    fn pair_ix(&self, u: VertexId, v: VertexId) -> Result<(u32, u32), NeighborhoodError> {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) if a != b => Ok((a, b)),
            _ => Err(NeighborhoodError::MissingEdge(u, v)),
        }
    }

    fn edge_ix(&self, u: VertexId, v: VertexId) -> Result<(u32, u32), NeighborhoodError> {
        let (a, b) = self.pair_ix(u, v)?;
        match self.grade_ix(a, b) {
            Some(_) => Ok((a, b)),
            None => Err(NeighborhoodError::MissingEdge(u, v)),
        }
    }

    pub(crate) fn grade_ix(&self, a: u32, b: u32) -> Option<Grade> {
        let list = &self.adj[a as usize];
        list.binary_search_by_key(&b, |&(x, _)| x).ok().map(|i| list[i].1)
    }

    pub(crate) fn set_grade_ix(&mut self, a: u32, b: u32, t: Grade) {
        for (x, y) in [(a, b), (b, a)] {
            let list = &mut self.adj[x as usize];
            if let Ok(i) = list.binary_search_by_key(&y, |&(z, _)| z) {
                list[i].1 = t;
            }
        }
    }

    pub(crate) fn remove_ix(&mut self, a: u32, b: u32) -> Option<Grade> {
        let mut old = None;
        for (x, y) in [(a, b), (b, a)] {
            let list = &mut self.adj[x as usize];
            if let Ok(i) = list.binary_search_by_key(&y, |&(z, _)| z) {
                old = Some(list.remove(i).1);
            }
        }
        old
    }

    pub(crate) fn insert_ix(&mut self, a: u32, b: u32, t: Grade) {
        for (x, y) in [(a, b), (b, a)] {
            let list = &mut self.adj[x as usize];
            match list.binary_search_by_key(&y, |&(z, _)| z) {
                Ok(i) => list[i].1 = t,
                Err(i) => list.insert(i, (y, t)),
            }
        }
    }

    /// Fills `present` (ascending) and `future` (by `(grade, vertex)`) for edge `ab`.
    pub(crate) fn common_neighbors_ix(
        &self,
        a: u32,
        b: u32,
        t: Grade,
        present: &mut Vec<u32>,
        future: &mut Vec<(Grade, u32)>,
        scratch: &mut Scratch,
    ) {
        present.clear();
        future.clear();
        let (la, lb) = (&self.adj[a as usize], &self.adj[b as usize]);
        let mut visit = |x: u32, ga: Grade, gb: Grade| {
            let g = ga.max(gb);
            if g <= t {
                present.push(x);
            } else {
                future.push((g, x));
            }
        };
        match self.repr {
            Representation::Dense => {
                let row = &mut scratch.row;
                for &(x, g) in la {
                    row[x as usize] = g;
                }
                for &(x, gb) in lb {
                    let ga = row[x as usize];
                    if x != a && ga != Grade::INFINITY {
                        visit(x, ga, gb);
                    }
                }
                for &(x, _) in la {
                    row[x as usize] = Grade::INFINITY;
                }
                // `lb` is sorted, so `present` already is.
            }
            Representation::Sparse => {
                let (mut i, mut j) = (0, 0);
                while i < la.len() && j < lb.len() {
                    let (xa, ga) = la[i];
                    let (xb, gb) = lb[j];
                    match xa.cmp(&xb) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            if xa != a && xa != b {
                                visit(xa, ga, gb);
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
        }
        future.sort_unstable();
    }

    /// Whether `w` dominates an edge whose present neighborhood is `present`.
    /// Requires `w ∈ present`. Gallops through `N[w]`, stopping at the first
    /// vertex of `present` that `w` does not see at `t`.
    pub(crate) fn dominates_ix(&self, w: u32, present: &[u32], t: Grade) -> bool {
        let nw = &self.adj[w as usize];
        if nw.len() + 1 < present.len() {
            return false;
        }
        let mut j = 0;
        for &x in present {
            if x == w {
                continue;
            }
            if j < nw.len() && nw[j].0 < x {
                let (mut lo, mut step) = (j, 1);
                while lo + step < nw.len() && nw[lo + step].0 < x {
                    lo += step;
                    step *= 2;
                }
                let hi = (lo + step + 1).min(nw.len());
                j = lo + 1 + nw[lo + 1..hi].partition_point(|&(y, _)| y < x);
            }
            if j == nw.len() || nw[j].0 != x || nw[j].1 > t {
                return false;
            }
            j += 1;
        }
        true
    }

    /// Smallest dominating vertex of the present set.
    pub(crate) fn find_dominator_ix(&self, present: &[u32], t: Grade) -> Option<u32> {
        present.iter().copied().find(|&w| self.dominates_ix(w, present, t))
    }

    /// Whether a previous dominator `w` still dominates after `added` joined
    /// the present set at grade `t`.
    pub(crate) fn still_dominates_ix(&self, w: u32, added: &[u32], t: Grade) -> bool {
        added
            .iter()
            .all(|&x| x == w || matches!(self.grade_ix(w, x), Some(g) if g <= t))
    }
}

/// Per-task scratch memory for dense lookups.
#[derive(Debug, Clone)]
pub(crate) struct Scratch {
    row: Vec<Grade>,
}

impl Scratch {
    pub(crate) fn new(map: &NeighborhoodMap) -> Self {
        let n = match map.repr {
            Representation::Dense => map.ids.len(),
            Representation::Sparse => 0,
        };
        Scratch {
            row: vec![Grade::INFINITY; n],
        }
    }
}
