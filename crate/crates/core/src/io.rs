//! Plain-text formats. Every format is line based, whitespace separated,
//! and treats `#` as the start of a comment.
//!
//! * graph: `u v t` is an edge, `v v t` declares the birth of vertex `v`;
//! * zigzag: `u v t +` or `u v t -` is an event, `v v t` a vertex birth;
//! * points: one point per line, one coordinate per column;
//! * diagram: `dim birth death`, with `inf` for an essential class.
//!
//! Writers emit the canonical form: births sorted by vertex, then edges or
//! events in their canonical order, grades in shortest round-trip decimal.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use crate::grade::{Grade, VertexId};
use crate::graph::{FilteredEdge, FilteredGraph, GraphError};
use crate::oracle::diagram::{Interval, IntervalConvention, PersistenceDiagram};
use crate::sample::{PointCloud, SampleError};
use crate::zigzag::{Direction, ZigzagError, ZigzagEvent, ZigzagFiltration};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Zigzag(#[from] ZigzagError),
    #[error(transparent)]
    Points(#[from] SampleError),
}

fn parse_error(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

pub fn read_file(path: impl AsRef<Path>) -> Result<String, IoError> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, contents).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn vertex(line: usize, s: &str) -> Result<VertexId, IoError> {
    s.parse::<u32>().map(VertexId).map_err(|_| parse_error(line, format!("invalid vertex id {s:?}")))
}

fn grade(line: usize, s: &str) -> Result<Grade, IoError> {
    let g: Grade = s.parse().map_err(|_| parse_error(line, format!("invalid grade {s:?}")))?;
    if !g.is_finite() {
        return Err(parse_error(line, format!("grade must be finite, got {s}")));
    }
    Ok(g)
}

fn declare_birth(births: &mut BTreeMap<VertexId, Grade>, line: usize, v: VertexId, t: Grade) -> Result<(), IoError> {
    if births.insert(v, t).is_some() {
        return Err(parse_error(line, format!("vertex {v} declared twice")));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<FilteredGraph, IoError> {
    let mut births = BTreeMap::new();
    let mut edges = Vec::new();
    let mut seen = HashMap::new();
    for (line, f) in records(text) {
        if f.len() != 3 {
            return Err(parse_error(line, format!("expected `u v t`, found {} fields", f.len())));
        }
        let (u, v, t) = (vertex(line, f[0])?, vertex(line, f[1])?, grade(line, f[2])?);
        if u == v {
            declare_birth(&mut births, line, u, t)?;
            continue;
        }
        let e = FilteredEdge::new(u, v, t)?;
        if let Some(first) = seen.insert(e.pair(), line) {
            return Err(parse_error(line, format!("edge ({}, {}) already listed on line {first}", e.u, e.v)));
        }
        edges.push(e);
    }
    Ok(FilteredGraph::new(births, edges)?)
}

pub fn format_graph(g: &FilteredGraph) -> String {
    let mut out = String::new();
    for (v, t) in g.births() {
        writeln!(out, "{v} {v} {t}").unwrap();
    }
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.t).unwrap();
    }
    out
}

/// Edge list only, without births.
pub fn format_edges(edges: &[FilteredEdge]) -> String {
    let mut out = String::new();
    for e in edges {
        writeln!(out, "{} {} {}", e.u, e.v, e.t).unwrap();
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<FilteredGraph, IoError> {
    parse_graph(&read_file(path)?)
}

pub fn write_graph(g: &FilteredGraph, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_file(path, &format_graph(g))
}

pub fn parse_zigzag(text: &str) -> Result<ZigzagFiltration, IoError> {
    let mut births = BTreeMap::new();
    let mut events = Vec::new();
    for (line, f) in records(text) {
        match f.len() {
            3 => {
                let (u, v, t) = (vertex(line, f[0])?, vertex(line, f[1])?, grade(line, f[2])?);
                if u != v {
                    return Err(parse_error(line, "an event needs a direction, `+` or `-`"));
                }
                declare_birth(&mut births, line, u, t)?;
            }
            4 => {
                let (u, v, t) = (vertex(line, f[0])?, vertex(line, f[1])?, grade(line, f[2])?);
                let direction = match f[3] {
                    "+" => Direction::Inclusion,
                    "-" => Direction::Removal,
                    other => return Err(parse_error(line, format!("direction must be `+` or `-`, got {other:?}"))),
                };
                events.push(ZigzagEvent::new(u, v, t, direction).map_err(|e| parse_error(line, e.to_string()))?);
            }
            n => return Err(parse_error(line, format!("expected `u v t +|-`, found {n} fields"))),
        }
    }
    Ok(ZigzagFiltration::new(births, events)?)
}

pub fn format_zigzag(z: &ZigzagFiltration) -> String {
    let mut out = String::new();
    for (v, t) in z.births() {
        writeln!(out, "{v} {v} {t}").unwrap();
    }
    for e in z.events() {
        writeln!(out, "{} {} {} {}", e.u, e.v, e.grade, e.direction).unwrap();
    }
    out
}

pub fn read_zigzag(path: impl AsRef<Path>) -> Result<ZigzagFiltration, IoError> {
    parse_zigzag(&read_file(path)?)
}

pub fn write_zigzag(z: &ZigzagFiltration, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_file(path, &format_zigzag(z))
}

pub fn parse_points(text: &str) -> Result<PointCloud, IoError> {
    let mut points = Vec::new();
    for (line, f) in records(text) {
        let p = f
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| parse_error(line, format!("invalid coordinate {s:?}"))))
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(first) = points.first().map(Vec::len).filter(|&d| d != p.len()) {
            return Err(parse_error(line, format!("expected {first} coordinates, found {}", p.len())));
        }
        points.push(p);
    }
    Ok(PointCloud::new(points)?)
}

pub fn format_points(p: &PointCloud) -> String {
    let mut out = String::new();
    for x in p.points() {
        let row: Vec<String> = x.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn parse_diagram(text: &str, convention: IntervalConvention) -> Result<PersistenceDiagram, IoError> {
    let mut d = PersistenceDiagram::new(convention);
    for (line, f) in records(text) {
        if f.len() != 3 {
            return Err(parse_error(line, format!("expected `dim birth death`, found {} fields", f.len())));
        }
        let dim: usize = f[0].parse().map_err(|_| parse_error(line, format!("invalid dimension {:?}", f[0])))?;
        let birth = grade(line, f[1])?;
        let death: Grade = f[2].parse().map_err(|_| parse_error(line, format!("invalid grade {:?}", f[2])))?;
        if death < birth {
            return Err(parse_error(line, "death before birth"));
        }
        d.push(dim, Interval::new(birth, death));
    }
    Ok(d)
}

pub fn format_diagram(d: &PersistenceDiagram) -> String {
    let mut out = String::new();
    for (dim, i) in d.points() {
        writeln!(out, "{dim} {} {}", i.birth, i.death).unwrap();
    }
    out
}
