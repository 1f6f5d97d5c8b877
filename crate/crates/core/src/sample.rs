//! Point clouds, Rips graphs and seeded synthetic datasets.

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grade::{Grade, VertexId};
use crate::graph::{FilteredEdge, FilteredGraph};
use crate::zigzag::{ZigzagEvent, ZigzagFiltration};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SampleError {
    #[error("point cloud is empty")]
    Empty,
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("threshold must be positive, got {0}")]
    BadThreshold(Grade),
    #[error("unknown sample kind {0:?}")]
    UnknownKind(String),
    #[error("need at least one point")]
    NoPoints,
}

/// Points of a common dimension, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(points: impl IntoIterator<Item = Vec<f64>>) -> Result<Self, SampleError> {
        let mut dim = None;
        let mut coords = Vec::new();
        for (index, p) in points.into_iter().enumerate() {
            let expected = *dim.get_or_insert(p.len());
            if p.len() != expected || expected == 0 {
                return Err(SampleError::DimensionMismatch { index, expected, found: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(SampleError::NonFinite(index));
            }
            coords.extend(p);
        }
        match dim {
            Some(dim) => Ok(PointCloud { dim, coords }),
            None => Err(SampleError::Empty),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.point(i).iter().zip(self.point(j)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// Every pair at distance at most `threshold`, graded by that distance.
/// All vertices are born at 0.
pub fn rips_graph(p: &PointCloud, threshold: Grade) -> Result<FilteredGraph, SampleError> {
    if threshold <= Grade::ZERO {
        return Err(SampleError::BadThreshold(threshold));
    }
    let n = p.len() as u32;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = Grade::from_f64(p.distance(i as usize, j as usize));
            if d <= threshold {
                edges.push(FilteredEdge { u: VertexId(i), v: VertexId(j), t: d });
            }
        }
    }
    Ok(FilteredGraph::new((0..n).map(|v| (VertexId(v), Grade::ZERO)), edges).expect("distinct pairs"))
}

/// Zigzag of Rips graphs whose scale follows `scales`: at grade `k` the
/// edges shorter than `scales[k]` that are missing come in, then the
/// present edges longer than `scales[k]` leave. Vertices are born at 0.
pub fn oscillating_rips(p: &PointCloud, scales: &[f64]) -> ZigzagFiltration {
    let n = p.len();
    let mut present = vec![false; n * n];
    let mut events = Vec::new();
    for (k, &r) in scales.iter().enumerate() {
        let grade = Grade::from_f64(k as f64);
        for i in 0..n {
            for j in i + 1..n {
                let inside = p.distance(i, j) <= r;
                if inside != present[i * n + j] {
                    present[i * n + j] = inside;
                    let e = if inside {
                        ZigzagEvent::inclusion(i as u32, j as u32, grade)
                    } else {
                        ZigzagEvent::removal(i as u32, j as u32, grade)
                    };
                    events.push(e.expect("distinct pair"));
                }
            }
        }
    }
    ZigzagFiltration::new((0..n as u32).map(|v| (VertexId(v), Grade::ZERO)), events).expect("consistent by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleKind {
    UniformSquare,
    Circle,
    RegularPolygon,
    Torus,
    CompleteGraph,
}

impl FromStr for SampleKind {
    type Err = SampleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "uniform_square" | "uniform-square" | "uniform" => SampleKind::UniformSquare,
            "circle" => SampleKind::Circle,
            "regular_polygon" | "regular-polygon" | "polygon" => SampleKind::RegularPolygon,
            "torus" => SampleKind::Torus,
            "complete_graph" | "complete-graph" | "complete" => SampleKind::CompleteGraph,
            _ => return Err(SampleError::UnknownKind(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Points(PointCloud),
    Graph(FilteredGraph),
}

pub fn sample(kind: SampleKind, n: usize, seed: u64) -> Result<Sample, SampleError> {
    if n == 0 {
        return Err(SampleError::NoPoints);
    }
    Ok(match kind {
        SampleKind::UniformSquare => Sample::Points(uniform_square(n, seed)),
        SampleKind::Circle => Sample::Points(circle(n, seed)),
        SampleKind::RegularPolygon => Sample::Points(regular_polygon(n)),
        SampleKind::Torus => Sample::Points(torus(n, seed)),
        SampleKind::CompleteGraph => Sample::Graph(complete_graph(n)),
    })
}

/// I.i.d. uniform points in the unit square.
pub fn uniform_square(n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new((0..n).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])).expect("n > 0")
}

/// I.i.d. points on the unit circle, uniform in angle.
pub fn circle(n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new((0..n).map(|_| {
        let a = rng.random::<f64>() * TAU;
        vec![a.cos(), a.sin()]
    }))
    .expect("n > 0")
}

/// Vertices of the regular `n`-gon inscribed in the unit circle, the first
/// one at `(1, 0)`.
pub fn regular_polygon(n: usize) -> PointCloud {
    PointCloud::new((0..n).map(|k| {
        let a = TAU * k as f64 / n as f64;
        vec![a.cos(), a.sin()]
    }))
    .expect("n > 0")
}

pub const TORUS_MAJOR_RADIUS: f64 = 2.0;
pub const TORUS_MINOR_RADIUS: f64 = 1.0;

/// Points on the torus of revolution around the z axis with radii
/// [`TORUS_MAJOR_RADIUS`] and [`TORUS_MINOR_RADIUS`], uniform in both angles.
pub fn torus(n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new((0..n).map(|_| {
        let (a, b) = (rng.random::<f64>() * TAU, rng.random::<f64>() * TAU);
        let ring = TORUS_MAJOR_RADIUS + TORUS_MINOR_RADIUS * b.cos();
        vec![ring * a.cos(), ring * a.sin(), TORUS_MINOR_RADIUS * b.sin()]
    }))
    .expect("n > 0")
}

/// Complete graph on `n` vertices with every vertex and edge at grade 0.
pub fn complete_graph(n: usize) -> FilteredGraph {
    let n = n as u32;
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| FilteredEdge { u: VertexId(i), v: VertexId(j), t: Grade::ZERO }));
    FilteredGraph::new((0..n).map(|v| (VertexId(v), Grade::ZERO)), edges).expect("distinct pairs")
}
