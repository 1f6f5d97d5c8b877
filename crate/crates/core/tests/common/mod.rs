//! Generators and brute-force reference implementations shared by the
//! integration tests. Everything here is deliberately naive.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use flagcollapse::grade::{Grade, VertexId};
use flagcollapse::graph::{FilteredEdge, FilteredGraph};
use flagcollapse::oracle::{Interval, PersistenceDiagram};
use flagcollapse::sample::{rips_graph, PointCloud};
use flagcollapse::zigzag::{ZigzagEvent, ZigzagFiltration};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn g(x: f64) -> Grade {
    Grade::from_f64(x)
}

pub fn points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> PointCloud {
    PointCloud::new((0..n).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())).unwrap()
}

/// Rips graph of `n` random points in the unit cube, no threshold.
pub fn random_rips(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> FilteredGraph {
    rips_graph(&points(rng, n, dim), Grade::INFINITY).unwrap()
}

/// Erdős–Rényi graph whose edges get the grades `1..=m` in random order.
pub fn random_distinct(rng: &mut ChaCha8Rng, n: u32, p: f64) -> FilteredGraph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    let mut grades: Vec<f64> = (1..=pairs.len()).map(|k| k as f64).collect();
    grades.shuffle(rng);
    let triples: Vec<(u32, u32, f64)> = pairs.iter().zip(grades).map(|(&(i, j), t)| (i, j, t)).collect();
    FilteredGraph::from_triples(&triples).unwrap()
}

/// Erdős–Rényi graph with grades drawn from a small set, so ties abound.
pub fn random_tied(rng: &mut ChaCha8Rng, n: u32, p: f64, levels: u32) -> FilteredGraph {
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                triples.push((i, j, rng.random_range(0..levels) as f64));
            }
        }
    }
    FilteredGraph::from_triples(&triples).unwrap()
}

/// Random event list on `n` vertices over `grades` grades.
pub fn random_zigzag(rng: &mut ChaCha8Rng, n: u32, grades: usize) -> ZigzagFiltration {
    let mut present = HashSet::new();
    let mut events = Vec::new();
    for k in 0..grades {
        let t = g(k as f64);
        for i in 0..n {
            for j in i + 1..n {
                if !present.contains(&(i, j)) && rng.random_bool(0.35) {
                    present.insert((i, j));
                    events.push(ZigzagEvent::inclusion(i, j, t).unwrap());
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if present.contains(&(i, j)) && rng.random_bool(0.25) {
                    present.remove(&(i, j));
                    events.push(ZigzagEvent::removal(i, j, t).unwrap());
                }
            }
        }
    }
    ZigzagFiltration::new((0..n).map(|v| (VertexId(v), g(0.0))), events).unwrap()
}

/// Alternating low/high scales for an oscillating Rips zigzag.
pub fn oscillating_scales(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len)
        .map(|k| if k % 2 == 0 { rng.random_range(0.2..0.6) } else { rng.random_range(0.4..0.9) })
        .collect()
}

/// Adjacency of the graph made of the edges of grade `<= t`.
pub fn adjacency_at(edges: &[FilteredEdge], t: Grade) -> HashMap<VertexId, BTreeSet<VertexId>> {
    let mut adj: HashMap<VertexId, BTreeSet<VertexId>> = HashMap::new();
    for e in edges.iter().filter(|e| e.t <= t) {
        adj.entry(e.u).or_default().insert(e.v);
        adj.entry(e.v).or_default().insert(e.u);
    }
    adj
}

fn closed(adj: &HashMap<VertexId, BTreeSet<VertexId>>, x: VertexId) -> BTreeSet<VertexId> {
    let mut s = adj.get(&x).cloned().unwrap_or_default();
    s.insert(x);
    s
}

/// Smallest `w` outside `{u, v}` with `N[u] ∩ N[v] ⊆ N[w]` in `G_t`,
/// testing the set inclusion literally for every vertex.
pub fn brute_dominator(edges: &[FilteredEdge], u: VertexId, v: VertexId, t: Grade) -> Option<VertexId> {
    let adj = adjacency_at(edges, t);
    let ne: BTreeSet<VertexId> = closed(&adj, u).intersection(&closed(&adj, v)).copied().collect();
    let mut all: BTreeSet<VertexId> = adj.keys().copied().collect();
    all.extend(edges.iter().flat_map(|e| [e.u, e.v]));
    all.into_iter().filter(|&w| w != u && w != v).find(|&w| ne.is_subset(&closed(&adj, w)))
}

/// Every subset of vertices that is a clique, by enumerating the power set.
pub fn power_set_cliques(g: &FilteredGraph, max_size: usize) -> BTreeSet<Vec<VertexId>> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let edges: HashSet<(VertexId, VertexId)> = g.edges().iter().map(|e| e.pair()).collect();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << vs.len()) {
        let s: Vec<VertexId> = (0..vs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
        if s.len() <= max_size && s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| edges.contains(&(a, b)))) {
            out.insert(s);
        }
    }
    out
}

fn linf(a: &Interval, b: &Interval) -> f64 {
    (a.birth.value() - b.birth.value()).abs().max((a.death.value() - b.death.value()).abs())
}

/// Bottleneck distance on finite points by trying every partial matching.
pub fn brute_bottleneck(a: &[Interval], b: &[Interval]) -> f64 {
    fn go(i: usize, a: &[Interval], b: &[Interval], used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if acc >= *best {
            return;
        }
        if i == a.len() {
            let rest = b
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(x, _)| x.persistence() / 2.0)
                .fold(acc, f64::max);
            *best = best.min(rest);
            return;
        }
        go(i + 1, a, b, used, acc.max(a[i].persistence() / 2.0), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, a, b, used, acc.max(linf(&a[i], &b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, a, b, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

pub fn finite(d: &PersistenceDiagram, dim: usize) -> Vec<Interval> {
    d.dimension(dim).iter().copied().filter(|i| !i.is_essential()).collect()
}

/// Connected components of `G_t` as a canonical partition.
pub fn components_at(g: &FilteredGraph, edges: &[FilteredEdge], t: Grade) -> BTreeSet<BTreeSet<VertexId>> {
    let vs: Vec<VertexId> = g.births().iter().filter(|(_, &b)| b <= t).map(|(&v, _)| v).collect();
    let ix: HashMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vs.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in edges.iter().filter(|e| e.t <= t) {
        let (a, b) = (find(&mut parent, ix[&e.u]), find(&mut parent, ix[&e.v]));
        parent[a] = b;
    }
    let mut groups: HashMap<usize, BTreeSet<VertexId>> = HashMap::new();
    for (i, &v) in vs.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().insert(v);
    }
    groups.into_values().collect()
}

/// The grades of `g` and its births, sorted and distinct.
pub fn all_grades(g: &FilteredGraph) -> Vec<Grade> {
    let s: BTreeSet<Grade> = g.edges().iter().map(|e| e.t).chain(g.births().values().copied()).collect();
    s.into_iter().collect()
}
