//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{brute_bottleneck, brute_dominator, g, oscillating_scales, points, random_distinct, random_rips, random_tied, rng};
use flagcollapse::approx::{approx_collapse, ApproxParams};
use flagcollapse::collapse::{
    backward_collapse, collapse_to_fixpoint, forward_collapse, Algorithm, CollapseResult, ForwardCollapser,
};
use flagcollapse::grade::{Grade, VertexId};
use flagcollapse::graph::{FilteredEdge, FilteredGraph};
use flagcollapse::io::format_graph;
use flagcollapse::neighborhood::{NeighborhoodMap, Representation};
use flagcollapse::oracle::{
    bottleneck_distance, diagrams_equal, flag_persistence, zigzag_persistence, zigzag_persistence_on_grid, Interval,
    IntervalConvention, PersistenceDiagram,
};
use flagcollapse::parallel::parallel_backward_collapse;
use flagcollapse::sample::{complete_graph, oscillating_rips};
use flagcollapse::zigzag::{zigzag_collapse, ZigzagEvent, ZigzagFiltration};
use rand::seq::SliceRandom;
use rand::Rng;

/// Float slack for `(t + eps) - t` exceeding `eps` by rounding.
const ROUNDING: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn same(a: &CollapseResult, b: &CollapseResult) -> bool {
    a.kept() == b.kept() && a.removed == b.removed
}

fn diagram_preservation() -> Outcome {
    let mut r = rng(1);
    let mut mismatches = [0usize; 3];
    for _ in 0..200 {
        let n = r.random_range(4..=12);
        let dim = r.random_range(2..=3);
        let input = random_rips(&mut r, n, dim);
        let expected = flag_persistence(&input, 2).unwrap();
        let outputs = [
            backward_collapse(&input).graph,
            forward_collapse(&input).graph,
            collapse_to_fixpoint(&input, Algorithm::Backward, 100, Representation::Dense).result.graph,
        ];
        for (k, out) in outputs.iter().enumerate() {
            if !diagrams_equal(&expected, &flag_persistence(out, 2).unwrap()) {
                mismatches[k] += 1;
            }
        }
    }
    outcome(
        mismatches == [0, 0, 0],
        format!("200 clouds, mismatches backward/forward/fixpoint = {mismatches:?}"),
    )
}

fn complete_graph_reduction() -> Outcome {
    let k700 = complete_graph(700);
    let fix = collapse_to_fixpoint(&k700, Algorithm::Backward, 100, Representation::Dense);
    let sizes = &fix.round_sizes;
    // The last entry confirms that the final round changed nothing.
    let shrinking = &sizes[..sizes.len() - 1];
    let decreasing = shrinking.windows(2).all(|w| w[1] < w[0]);
    let rounds = shrinking.len() - 1;
    let k900 = complete_graph(900);
    let clock = Instant::now();
    let one = backward_collapse(&k900);
    let elapsed = clock.elapsed();
    let pass = sizes[0] == 244_650
        && fix.result.kept().len() == 699
        && decreasing
        && rounds <= 8
        && elapsed <= Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "K_700 round sizes {sizes:?} ({rounds} shrinking rounds); K_900 one round kept {} in {:.2}s",
            one.kept().len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn backward_beats_forward_on_ties() -> Outcome {
    let k = complete_graph(900);
    let backward = backward_collapse(&k).kept().len();
    // Equal grades leave the arrival order free; feed the edges in a seeded
    // random order, as a file produced by another tool would.
    let mut stream = k.edges().to_vec();
    stream.shuffle(&mut rng(3));
    let mut fc = ForwardCollapser::new(k.births().clone(), Representation::Dense);
    for e in stream {
        fc.push(e).unwrap();
    }
    let shuffled = fc.finish().kept().len();
    let lexicographic = forward_collapse(&k).kept().len();
    outcome(
        3 * backward <= shuffled,
        format!(
            "K_900: backward keeps {backward}, forward keeps {shuffled} on a shuffled stream \
             (ratio {:.1}); forward on (u, v) order keeps {lexicographic}",
            shuffled as f64 / backward as f64
        ),
    )
}

fn forward_backward_agreement() -> Outcome {
    let mut r = rng(4);
    let mut differ = 0;
    let mut edges = 0;
    for _ in 0..100 {
        let n = r.random_range(5..=60);
        let p = r.random_range(0.1..0.9);
        let input = random_distinct(&mut r, n, p);
        edges += input.num_edges();
        if !same(&backward_collapse(&input), &forward_collapse(&input)) {
            differ += 1;
        }
    }
    outcome(differ == 0, format!("100 graphs, {edges} edges, {differ} disagreements"))
}

/// Random graph with `m` distinct grades on `m / 8` vertices.
fn sparse_distinct(r: &mut impl Rng, m: usize) -> FilteredGraph {
    let n = (m / 8).max(16) as u32;
    let mut pairs = HashSet::new();
    while pairs.len() < m {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let mut pairs: Vec<_> = pairs.into_iter().collect();
    pairs.sort_unstable();
    let mut grades: Vec<usize> = (0..m).collect();
    grades.shuffle(r);
    let edges = pairs.into_iter().zip(grades).map(|((a, b), t)| FilteredEdge::new(a, b, g(t as f64)).unwrap());
    FilteredGraph::from_edges(edges).unwrap()
}

fn parallel_identity() -> Outcome {
    let mut r = rng(5);
    let mut differ = 0;
    for _ in 0..50 {
        let m = r.random_range(10_000..=100_000);
        let input = sparse_distinct(&mut r, m);
        let seq = backward_collapse(&input);
        for parts in [2, 4, 8] {
            if !same(&parallel_backward_collapse(&input, parts).unwrap(), &seq) {
                differ += 1;
            }
        }
    }
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let timing = if cores >= 4 {
        let input = sparse_distinct(&mut r, 100_000);
        let time = |threads: usize, parts: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let clock = Instant::now();
            pool.install(|| parallel_backward_collapse(&input, parts).unwrap());
            clock.elapsed().as_secs_f64()
        };
        let (one, four) = (time(1, 1), time(4, 4));
        Some((one, four))
    } else {
        None
    };
    let fast_enough = timing.is_none_or(|(one, four)| four <= 0.8 * one);
    let timing_note = match timing {
        Some((one, four)) => format!("4 threads {four:.3}s vs 1 thread {one:.3}s"),
        None => format!("speedup check skipped, {cores} core(s) available"),
    };
    outcome(
        differ == 0 && fast_enough,
        format!("50 inputs x parts {{2, 4, 8}}: {differ} differences; {timing_note}"),
    )
}

fn approximation_bound() -> Outcome {
    let mut r = rng(6);
    let inputs: Vec<FilteredGraph> = (0..100)
        .map(|_| {
            let n = r.random_range(4..=11);
            random_rips(&mut r, n, 2)
        })
        .collect();
    let mut worst = [0.0f64; 3];
    let mut violations = 0;
    for (k, eps) in [0.01, 0.1, 0.5].into_iter().enumerate() {
        for input in &inputs {
            let out = approx_collapse(input, ApproxParams::additive(eps).unwrap()).unwrap();
            let (a, b) = (flag_persistence(input, 2).unwrap(), flag_persistence(&out.graph, 2).unwrap());
            for dim in 0..=2 {
                let d = bottleneck_distance(&a, &b, dim).value();
                worst[k] = worst[k].max(d);
                if d > eps + ROUNDING {
                    violations += 1;
                }
            }
        }
    }
    let zero = ApproxParams::additive(0.0).unwrap();
    let byte_identical = inputs
        .iter()
        .all(|i| format_graph(&approx_collapse(i, zero).unwrap().graph) == format_graph(&backward_collapse(i).graph));

    // Log-scale check: vertices born at the first edge grade so every grade is positive.
    let log = |t: Grade| if t.is_finite() { g(t.value().ln()) } else { t };
    let mut log_violations = 0;
    let mut worst_log = 0.0f64;
    for input in &inputs {
        let first = input.edges()[0].t;
        let pos = FilteredGraph::new(input.vertices().map(|v| (v, first)), input.edges().iter().copied()).unwrap();
        for alpha in [1.1, 1.5, 2.0] {
            let out = approx_collapse(&pos, ApproxParams::multiplicative(alpha).unwrap()).unwrap();
            let a = flag_persistence(&pos, 2).unwrap().map_grades(log);
            let b = flag_persistence(&out.graph, 2).unwrap().map_grades(log);
            for dim in 0..=2 {
                let d = bottleneck_distance(&a, &b, dim).value();
                worst_log = worst_log.max(d / f64::ln(alpha));
                if d > alpha.ln() + ROUNDING {
                    log_violations += 1;
                }
            }
        }
    }
    outcome(
        violations == 0 && byte_identical && log_violations == 0,
        format!(
            "worst distance for eps 0.01/0.1/0.5 = {worst:.4?}; eps 0 identical: {byte_identical}; \
             multiplicative: {log_violations} violations, worst log distance / ln(alpha) = {worst_log:.3}"
        ),
    )
}

fn detour(e_out: f64, f_in: f64) -> ZigzagFiltration {
    let mut events: Vec<ZigzagEvent> = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4)]
        .into_iter()
        .map(|(a, b)| ZigzagEvent::inclusion(a, b, g(1.0)).unwrap())
        .collect();
    events.push(ZigzagEvent::inclusion(4, 3, g(f_in)).unwrap());
    events.push(ZigzagEvent::removal(0, 3, g(e_out)).unwrap());
    ZigzagFiltration::new([(VertexId(5), g(2.0)), (VertexId(6), g(4.0)), (VertexId(7), g(5.0))], events).unwrap()
}

fn h1(d: &PersistenceDiagram) -> Vec<(f64, f64)> {
    d.dimension(1).iter().map(|i| (i.birth.value(), i.death.value())).collect()
}

fn zigzag_correctness() -> Outcome {
    let top = detour(3.0, 3.0);
    let reduced = zigzag_collapse(&top, 10).unwrap();
    let kept_diagram = h1(&zigzag_persistence_on_grid(&reduced.filtration, &top.grades(), 1).unwrap());
    let legal = h1(&zigzag_persistence(&top, 1).unwrap()) == [(1.0, 5.0)]
        && kept_diagram == [(1.0, 5.0)]
        && reduced.stats.refused_shifts > 0;
    let moved = h1(&zigzag_persistence(&detour(2.0, 4.0), 1).unwrap());
    let moved_same_grade = h1(&zigzag_persistence(&detour(3.0, 4.0), 1).unwrap());
    let split = moved == [(1.0, 2.0), (4.0, 5.0)] && moved_same_grade.len() == 2;

    let mut r = rng(7);
    let mut mismatches = 0;
    let mut operations = 0;
    for _ in 0..100 {
        let n = r.random_range(4..=10);
        let cloud = points(&mut r, n, 2);
        let len = r.random_range(3..=8);
        let z = oscillating_rips(&cloud, &oscillating_scales(&mut r, len));
        let out = zigzag_collapse(&z, 10).unwrap();
        operations += out.stats.shifts + out.stats.cancellations + out.stats.trims;
        let before = zigzag_persistence(&z, 2).unwrap();
        let after = zigzag_persistence_on_grid(&out.filtration, &z.grades(), 2).unwrap();
        if !diagrams_equal(&before, &after) {
            mismatches += 1;
        }
    }
    let mut monotone_differ = 0;
    for _ in 0..100 {
        let n = r.random_range(2..=12);
        let graph = random_rips(&mut r, n, 2);
        let out = zigzag_collapse(&ZigzagFiltration::from_graph(&graph), 1).unwrap().filtration;
        if out.to_graph().unwrap().edges() != backward_collapse(&graph).kept() {
            monotone_differ += 1;
        }
    }
    outcome(
        legal && split && mismatches == 0 && monotone_differ == 0,
        format!(
            "detour example kept {kept_diagram:?} with {} refused shift(s); moved chord gives {moved:?} \
             (same-grade removal {moved_same_grade:?}); 100 oscillating zigzags: {mismatches} mismatches \
             after {operations} operations; monotone: {monotone_differ} differences",
            reduced.stats.refused_shifts
        ),
    )
}

fn random_diagram(r: &mut impl Rng) -> Vec<Interval> {
    (0..r.random_range(0..=6))
        .map(|_| {
            let b = r.random_range(0..16) as f64 / 4.0;
            Interval::new(g(b), g(b + r.random_range(0..12) as f64 / 4.0))
        })
        .collect()
}

fn oracle_consistency() -> Outcome {
    let mut r = rng(8);
    let mut domination_differ = 0;
    let mut checks = 0;
    for _ in 0..500 {
        let n = r.random_range(2..=10);
        let p = r.random_range(0.2..0.9);
        let graph = random_tied(&mut r, n, p, 4);
        let map = NeighborhoodMap::from_graph(&graph, Representation::Dense);
        for e in graph.edges() {
            for t in (0..4).map(|k| g(k as f64)).chain([Grade::INFINITY]).filter(|&t| t >= e.t) {
                checks += 1;
                if map.is_dominated(e.u, e.v, t).unwrap() != brute_dominator(graph.edges(), e.u, e.v, t) {
                    domination_differ += 1;
                }
            }
        }
    }
    let mut bottleneck_differ = 0;
    for _ in 0..500 {
        let (a, b) = (random_diagram(&mut r), random_diagram(&mut r));
        let diagram = |x: &[Interval]| {
            PersistenceDiagram::from_points(IntervalConvention::HalfOpen, x.iter().map(|i| (0, i.birth, i.death)))
        };
        if bottleneck_distance(&diagram(&a), &diagram(&b), 0).value() != brute_bottleneck(&a, &b) {
            bottleneck_differ += 1;
        }
    }
    let octahedron: Vec<_> = (0..6u32)
        .flat_map(|a| (a + 1..6).map(move |b| (a, b)))
        .filter(|&(a, b)| a / 2 != b / 2)
        .map(|(a, b)| (a, b, 1.0))
        .collect();
    let h2 = flag_persistence(&FilteredGraph::from_triples(&octahedron).unwrap(), 2).unwrap().dimension(2).to_vec();
    let octahedron_ok = h2 == [Interval::new(g(1.0), Grade::INFINITY)];
    outcome(
        domination_differ == 0 && bottleneck_differ == 0 && octahedron_ok,
        format!(
            "domination: {domination_differ}/{checks} differ; bottleneck: {bottleneck_differ}/500 differ; \
             octahedron H2 = {h2:?}"
        ),
    )
}

/// Random graph with `m` distinct grades and every degree at most `k`.
fn bounded_degree(r: &mut impl Rng, m: usize, k: usize) -> FilteredGraph {
    let n = (2 * m).div_ceil(k) as u32 + 1;
    let mut degree = vec![0usize; n as usize];
    let mut pairs = HashSet::new();
    while pairs.len() < m {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        let key = (a.min(b), a.max(b));
        if a != b && degree[a as usize] < k && degree[b as usize] < k && pairs.insert(key) {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
    }
    let mut grades: Vec<usize> = (0..m).collect();
    grades.shuffle(r);
    let edges = pairs.into_iter().zip(grades).map(|((a, b), t)| FilteredEdge::new(a, b, g(t as f64)).unwrap());
    FilteredGraph::from_edges(edges).unwrap()
}

fn complexity_smoke() -> Outcome {
    let mut r = rng(9);
    let m = 40_000;
    let mut times = Vec::new();
    for k in [16, 32, 64] {
        let graph = bounded_degree(&mut r, m, k);
        let clock = Instant::now();
        let kept = backward_collapse(&graph).kept().len();
        times.push((k, clock.elapsed().as_secs_f64(), kept));
    }
    let base = times[0].1.max(1e-6);
    let within = times.iter().all(|&(k, t, _)| t / base <= (k as f64 / 16.0).powi(3) * 1.5);
    let rows: Vec<String> = times.iter().map(|(k, t, kept)| format!("k={k}: {t:.3}s ({kept} kept)")).collect();
    // Informational only.
    outcome(true, format!("{} edges; {}; within k^3 x 1.5: {within}", m, rows.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("diagram preservation", diagram_preservation),
        ("complete graph", complete_graph_reduction),
        ("backward beats forward on ties", backward_beats_forward_on_ties),
        ("forward/backward agreement", forward_backward_agreement),
        ("parallel identity", parallel_identity),
        ("approximation bound", approximation_bound),
        ("zigzag correctness", zigzag_correctness),
        ("oracle self-consistency", oracle_consistency),
        ("complexity smoke (informational)", complexity_smoke),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let clock = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let message = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {message}"))
        });
        failed += usize::from(!result.pass);
        println!(
            "criterion {} {}: {} ({:.1}s) {}",
            i + 1,
            name,
            if result.pass { "PASS" } else { "FAIL" },
            clock.elapsed().as_secs_f64(),
            result.detail
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
