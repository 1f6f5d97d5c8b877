//! Python bindings: graphs and zigzags as classes, the reductions and the
//! small-input persistence tools as functions. Grades cross the boundary as
//! floats, vertices as non-negative integers.

use std::collections::BTreeMap;

use flagcollapse::approx::{approx_collapse_with, ApproxParams};
use flagcollapse::collapse::{collapse_once, collapse_to_fixpoint, Algorithm, CollapseResult, CollapseStats};
use flagcollapse::grade::{Grade, VertexId};
use flagcollapse::graph::{FilteredEdge, FilteredGraph};
use flagcollapse::io;
use flagcollapse::neighborhood::Representation;
use flagcollapse::oracle::{self, IntervalConvention, PersistenceDiagram};
use flagcollapse::parallel::parallel_backward_collapse_with;
use flagcollapse::sample::{self as samplers, PointCloud, Sample, SampleKind};
use flagcollapse::zigzag::{zigzag_collapse as reduce_zigzag, Direction, ZigzagEvent, ZigzagFiltration};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn grade(t: f64) -> PyResult<Grade> {
    Grade::new(t).ok_or_else(|| PyValueError::new_err("grade must not be NaN"))
}

fn births(map: Option<BTreeMap<u32, f64>>) -> PyResult<Vec<(VertexId, Grade)>> {
    map.unwrap_or_default().into_iter().map(|(v, t)| Ok((VertexId(v), grade(t)?))).collect()
}

fn representation(sparse: bool) -> Representation {
    if sparse {
        Representation::Sparse
    } else {
        Representation::Dense
    }
}

fn algorithm(name: &str) -> PyResult<Algorithm> {
    match name {
        "backward" => Ok(Algorithm::Backward),
        "forward" => Ok(Algorithm::Forward),
        other => Err(PyValueError::new_err(format!("unknown algorithm {other:?}, expected backward or forward"))),
    }
}

/// A graph whose vertices and edges carry grades.
#[pyclass(name = "Graph", module = "pyflagcollapse", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: FilteredGraph,
}

#[pymethods]
impl PyGraph {
    /// `edges` is a list of `(u, v, t)`; `births` maps vertices to their
    /// grade and defaults to the earliest incident edge.
    #[new]
    #[pyo3(signature = (edges, births=None))]
    fn new(edges: Vec<(u32, u32, f64)>, births: Option<BTreeMap<u32, f64>>) -> PyResult<Self> {
        let edges = edges
            .into_iter()
            .map(|(u, v, t)| FilteredEdge::new(u, v, grade(t)?).map_err(value_error))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = FilteredGraph::new(self::births(births)?, edges).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    /// Parses the `u v t` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: io::parse_graph(text).map_err(value_error)? })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: io::read_graph(path).map_err(value_error)? })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        io::write_graph(&self.inner, path).map_err(value_error)
    }

    /// Edges as `(u, v, t)`, sorted by grade then vertices.
    fn edges(&self) -> Vec<(u32, u32, f64)> {
        self.inner.edges().iter().map(|e| (e.u.0, e.v.0, e.t.value())).collect()
    }

    fn births(&self) -> BTreeMap<u32, f64> {
        self.inner.births().iter().map(|(v, t)| (v.0, t.value())).collect()
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    fn __len__(&self) -> usize {
        self.inner.num_edges()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        io::format_graph(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph(vertices={}, edges={})", self.inner.num_vertices(), self.inner.num_edges())
    }
}

/// Output of a graph reduction.
#[pyclass(name = "CollapseResult", module = "pyflagcollapse", frozen, get_all)]
pub struct PyCollapseResult {
    /// The reduced graph.
    graph: Py<PyGraph>,
    /// Dropped edges at their original grades.
    removed: Vec<(u32, u32, f64)>,
    /// Work counters: domination_checks, shifts, trims.
    stats: BTreeMap<&'static str, u64>,
    /// Edge count before and after each round.
    round_sizes: Vec<usize>,
}

fn stats_map(s: CollapseStats) -> BTreeMap<&'static str, u64> {
    BTreeMap::from([("domination_checks", s.domination_checks), ("shifts", s.shifts), ("trims", s.trims)])
}

fn wrap(py: Python<'_>, before: usize, r: CollapseResult, round_sizes: Option<Vec<usize>>) -> PyResult<PyCollapseResult> {
    let round_sizes = round_sizes.unwrap_or_else(|| vec![before, r.graph.num_edges()]);
    Ok(PyCollapseResult {
        removed: r.removed.iter().map(|e| (e.u.0, e.v.0, e.t.value())).collect(),
        stats: stats_map(r.stats),
        graph: Py::new(py, PyGraph { inner: r.graph })?,
        round_sizes,
    })
}

#[pymethods]
impl PyCollapseResult {
    fn __repr__(&self) -> String {
        format!("CollapseResult(removed={}, round_sizes={:?})", self.removed.len(), self.round_sizes)
    }
}

/// One round of the backward reduction.
#[pyfunction]
#[pyo3(signature = (graph, sparse=false))]
fn backward_collapse(py: Python<'_>, graph: &PyGraph, sparse: bool) -> PyResult<PyCollapseResult> {
    let g = &graph.inner;
    let r = py.detach(|| collapse_once(g, Algorithm::Backward, representation(sparse)));
    wrap(py, g.num_edges(), r, None)
}

/// One round of the forward reduction.
#[pyfunction]
#[pyo3(signature = (graph, sparse=false))]
fn forward_collapse(py: Python<'_>, graph: &PyGraph, sparse: bool) -> PyResult<PyCollapseResult> {
    let g = &graph.inner;
    let r = py.detach(|| collapse_once(g, Algorithm::Forward, representation(sparse)));
    wrap(py, g.num_edges(), r, None)
}

/// Repeats a reduction until a round changes nothing.
#[pyfunction]
#[pyo3(signature = (graph, algorithm="backward", max_rounds=1000, sparse=false))]
fn collapse_to_fixpoint_py(
    py: Python<'_>,
    graph: &PyGraph,
    algorithm: &str,
    max_rounds: usize,
    sparse: bool,
) -> PyResult<PyCollapseResult> {
    if max_rounds == 0 {
        return Err(PyValueError::new_err("max_rounds must be at least 1"));
    }
    let alg = self::algorithm(algorithm)?;
    let g = &graph.inner;
    let fix = py.detach(|| collapse_to_fixpoint(g, alg, max_rounds, representation(sparse)));
    wrap(py, g.num_edges(), fix.result, Some(fix.round_sizes))
}

/// Backward reduction split into `parts` (a power of two) parallel ranges.
#[pyfunction]
#[pyo3(signature = (graph, parts, sparse=false))]
fn parallel_backward_collapse(py: Python<'_>, graph: &PyGraph, parts: usize, sparse: bool) -> PyResult<PyCollapseResult> {
    let g = &graph.inner;
    let r = py.detach(|| parallel_backward_collapse_with(g, parts, representation(sparse))).map_err(value_error)?;
    wrap(py, g.num_edges(), r, None)
}

/// Approximate backward reduction; give exactly one of `epsilon` (additive)
/// or `alpha` (multiplicative).
#[pyfunction]
#[pyo3(signature = (graph, epsilon=None, alpha=None, sparse=false))]
fn approx_collapse(
    py: Python<'_>,
    graph: &PyGraph,
    epsilon: Option<f64>,
    alpha: Option<f64>,
    sparse: bool,
) -> PyResult<PyCollapseResult> {
    let params = match (epsilon, alpha) {
        (Some(e), None) => ApproxParams::additive(e),
        (None, Some(a)) => ApproxParams::multiplicative(a),
        _ => return Err(PyValueError::new_err("give exactly one of epsilon and alpha")),
    }
    .map_err(value_error)?;
    let g = &graph.inner;
    let r = py.detach(|| approx_collapse_with(g, params, representation(sparse))).map_err(value_error)?;
    wrap(py, g.num_edges(), r, None)
}

/// A sequence of edge inclusions (`"+"`) and removals (`"-"`).
#[pyclass(name = "Zigzag", module = "pyflagcollapse", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyZigzag {
    inner: ZigzagFiltration,
}

#[pymethods]
impl PyZigzag {
    /// `events` is a list of `(u, v, t, "+" | "-")`.
    #[new]
    #[pyo3(signature = (events, births=None))]
    fn new(events: Vec<(u32, u32, f64, String)>, births: Option<BTreeMap<u32, f64>>) -> PyResult<Self> {
        let events = events
            .into_iter()
            .map(|(u, v, t, d)| {
                let direction = match d.as_str() {
                    "+" => Direction::Inclusion,
                    "-" => Direction::Removal,
                    other => return Err(PyValueError::new_err(format!("direction must be + or -, got {other:?}"))),
                };
                ZigzagEvent::new(u, v, grade(t)?, direction).map_err(value_error)
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = ZigzagFiltration::new(self::births(births)?, events).map_err(value_error)?;
        Ok(PyZigzag { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyZigzag { inner: io::parse_zigzag(text).map_err(value_error)? })
    }

    /// The zigzag made of the inclusions of `graph`.
    #[staticmethod]
    fn from_graph(graph: &PyGraph) -> Self {
        PyZigzag { inner: ZigzagFiltration::from_graph(&graph.inner) }
    }

    fn events(&self) -> Vec<(u32, u32, f64, String)> {
        self.inner.events().iter().map(|e| (e.u.0, e.v.0, e.grade.value(), e.direction.to_string())).collect()
    }

    fn births(&self) -> BTreeMap<u32, f64> {
        self.inner.births().iter().map(|(v, t)| (v.0, t.value())).collect()
    }

    fn grades(&self) -> Vec<f64> {
        self.inner.grades().into_iter().map(Grade::value).collect()
    }

    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }

    fn __len__(&self) -> usize {
        self.inner.num_events()
    }

    fn __str__(&self) -> String {
        io::format_zigzag(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Zigzag(events={}, grades={})", self.inner.num_events(), self.inner.grades().len())
    }
}

/// Reduces a zigzag; returns the reduced zigzag and its work counters.
#[pyfunction]
#[pyo3(signature = (zigzag, passes=10))]
fn zigzag_collapse(py: Python<'_>, zigzag: &PyZigzag, passes: usize) -> PyResult<(PyZigzag, BTreeMap<&'static str, u64>)> {
    let z = &zigzag.inner;
    let r = py.detach(|| reduce_zigzag(z, passes)).map_err(value_error)?;
    let s = r.stats;
    let stats = BTreeMap::from([
        ("passes", s.passes as u64),
        ("domination_checks", s.domination_checks),
        ("shifts", s.shifts),
        ("cancellations", s.cancellations),
        ("trims", s.trims),
        ("refused_shifts", s.refused_shifts),
    ]);
    Ok((PyZigzag { inner: r.filtration }, stats))
}

type Points = Vec<(usize, f64, f64)>;

fn points_of(d: &PersistenceDiagram) -> Points {
    d.points().map(|(k, i)| (k, i.birth.value(), i.death.value())).collect()
}

fn diagram_of(points: Points) -> PyResult<PersistenceDiagram> {
    let points = points.into_iter().map(|(k, b, d)| Ok((k, grade(b)?, grade(d)?))).collect::<PyResult<Vec<_>>>()?;
    Ok(PersistenceDiagram::from_points(IntervalConvention::HalfOpen, points))
}

/// Half-open persistence diagram of the flag filtration, as
/// `(dim, birth, death)` with `inf` for essential classes.
#[pyfunction]
#[pyo3(signature = (graph, max_dim=1))]
fn flag_persistence(py: Python<'_>, graph: &PyGraph, max_dim: usize) -> PyResult<Points> {
    let g = &graph.inner;
    let d = py.detach(|| oracle::flag_persistence(g, max_dim)).map_err(value_error)?;
    Ok(points_of(&d))
}

/// Closed-interval zigzag diagram, on the zigzag's own grades or on `grid`.
#[pyfunction]
#[pyo3(signature = (zigzag, max_dim=1, grid=None))]
fn zigzag_persistence(py: Python<'_>, zigzag: &PyZigzag, max_dim: usize, grid: Option<Vec<f64>>) -> PyResult<Points> {
    let grid = match grid {
        Some(g) => g.into_iter().map(grade).collect::<PyResult<Vec<_>>>()?,
        None => zigzag.inner.grades(),
    };
    let z = &zigzag.inner;
    let d = py.detach(|| oracle::zigzag_persistence_on_grid(z, &grid, max_dim)).map_err(value_error)?;
    Ok(points_of(&d))
}

/// Bottleneck distance between the dimension-`dim` parts of two diagrams.
#[pyfunction]
#[pyo3(signature = (a, b, dim=0))]
fn bottleneck_distance(a: Points, b: Points, dim: usize) -> PyResult<f64> {
    Ok(oracle::bottleneck_distance(&diagram_of(a)?, &diagram_of(b)?, dim).value())
}

/// Rips graph of a list of points, optionally cut at `threshold`.
#[pyfunction]
#[pyo3(signature = (points, threshold=None))]
fn rips_graph(points: Vec<Vec<f64>>, threshold: Option<f64>) -> PyResult<PyGraph> {
    let cloud = PointCloud::new(points).map_err(value_error)?;
    let threshold = threshold.map(grade).transpose()?.unwrap_or(Grade::INFINITY);
    Ok(PyGraph { inner: samplers::rips_graph(&cloud, threshold).map_err(value_error)? })
}

/// Seeded dataset: a list of points, or a `Graph` for `complete_graph`.
#[pyfunction]
#[pyo3(signature = (kind, n, seed=0))]
fn sample(py: Python<'_>, kind: &str, n: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let kind: SampleKind = kind.parse().map_err(value_error)?;
    match samplers::sample(kind, n, seed).map_err(value_error)? {
        Sample::Points(p) => {
            let rows: Vec<Vec<f64>> = p.points().map(<[f64]>::to_vec).collect();
            Ok(rows.into_pyobject(py)?.into_any().unbind())
        }
        Sample::Graph(g) => Ok(Py::new(py, PyGraph { inner: g })?.into_any()),
    }
}

#[pymodule]
fn pyflagcollapse(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyZigzag>()?;
    m.add_class::<PyCollapseResult>()?;
    m.add_function(wrap_pyfunction!(backward_collapse, m)?)?;
    m.add_function(wrap_pyfunction!(forward_collapse, m)?)?;
    m.add("collapse_to_fixpoint", wrap_pyfunction!(collapse_to_fixpoint_py, m)?)?;
    m.add_function(wrap_pyfunction!(parallel_backward_collapse, m)?)?;
    m.add_function(wrap_pyfunction!(approx_collapse, m)?)?;
    m.add_function(wrap_pyfunction!(zigzag_collapse, m)?)?;
    m.add_function(wrap_pyfunction!(flag_persistence, m)?)?;
    m.add_function(wrap_pyfunction!(zigzag_persistence, m)?)?;
    m.add_function(wrap_pyfunction!(bottleneck_distance, m)?)?;
    m.add_function(wrap_pyfunction!(rips_graph, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    Ok(())
}
