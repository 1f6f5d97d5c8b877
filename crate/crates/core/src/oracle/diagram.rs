//! Persistence diagrams as sorted multisets of intervals.

use std::fmt;

use crate::grade::Grade;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IntervalConvention {
    /// `[birth, death)`, as produced by ordinary persistence.
    #[default]
    HalfOpen,
    /// `[birth, death]`, as produced by zigzag persistence.
    Closed,
}

/// One interval of a diagram. An essential class has `death == Grade::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub birth: Grade,
    pub death: Grade,
}

impl Interval {
    pub fn new(birth: Grade, death: Grade) -> Self {
        debug_assert!(birth <= death);
        Interval { birth, death }
    }

    pub fn is_essential(&self) -> bool {
        self.death == Grade::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death.value() - self.birth.value()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.birth, self.death)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PersistenceDiagram {
    convention: IntervalConvention,
    dims: Vec<Vec<Interval>>,
}

impl PersistenceDiagram {
    pub fn new(convention: IntervalConvention) -> Self {
        PersistenceDiagram { convention, dims: Vec::new() }
    }

    pub fn from_points(convention: IntervalConvention, points: impl IntoIterator<Item = (usize, Grade, Grade)>) -> Self {
        let mut d = Self::new(convention);
        for (dim, b, e) in points {
            d.push(dim, Interval::new(b, e));
        }
        d
    }

    pub fn convention(&self) -> IntervalConvention {
        self.convention
    }

    pub fn push(&mut self, dim: usize, interval: Interval) {
        if self.dims.len() <= dim {
            self.dims.resize(dim + 1, Vec::new());
        }
        let row = &mut self.dims[dim];
        let at = row.partition_point(|x| *x <= interval);
        row.insert(at, interval);
    }

    /// Intervals in dimension `dim`, sorted by birth then death.
    pub fn dimension(&self, dim: usize) -> &[Interval] {
        self.dims.get(dim).map_or(&[], Vec::as_slice)
    }

    /// One past the highest dimension holding an interval.
    pub fn num_dims(&self) -> usize {
        self.dims.iter().rposition(|d| !d.is_empty()).map_or(0, |i| i + 1)
    }

    pub fn len(&self) -> usize {
        self.dims.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All points as `(dim, interval)`, by dimension then interval.
    pub fn points(&self) -> impl Iterator<Item = (usize, Interval)> + '_ {
        self.dims.iter().enumerate().flat_map(|(d, v)| v.iter().map(move |&i| (d, i)))
    }

    /// Keeps dimensions `0..=max_dim`.
    pub fn truncated(&self, max_dim: usize) -> Self {
        let mut d = self.clone();
        d.dims.truncate(max_dim + 1);
        d
    }

    /// Applies `f` to every endpoint; infinite deaths are left alone.
    pub fn map_grades(&self, f: impl Fn(Grade) -> Grade) -> Self {
        Self::from_points(
            self.convention,
            self.points().map(|(d, i)| (d, f(i.birth), if i.is_essential() { i.death } else { f(i.death) })),
        )
    }
}

/// Exact multiset equality, dimension by dimension. Diagrams in different
/// conventions are never equal.
pub fn diagrams_equal(a: &PersistenceDiagram, b: &PersistenceDiagram) -> bool {
    a.convention == b.convention
        && (0..a.num_dims().max(b.num_dims())).all(|d| a.dimension(d) == b.dimension(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: f64) -> Grade {
        Grade::from_f64(x)
    }

    #[test]
    fn multiplicity_matters() {
        let one = PersistenceDiagram::from_points(IntervalConvention::HalfOpen, [(0, g(1.0), g(2.0))]);
        let two = PersistenceDiagram::from_points(IntervalConvention::HalfOpen, [(0, g(1.0), g(2.0)), (0, g(1.0), g(2.0))]);
        assert!(diagrams_equal(&one, &one));
        assert!(!diagrams_equal(&one, &two));
    }

    #[test]
    fn trailing_empty_dimensions_are_ignored() {
        let mut a = PersistenceDiagram::new(IntervalConvention::Closed);
        a.push(0, Interval::new(g(0.0), Grade::INFINITY));
        let mut b = a.clone();
        b.dims.resize(4, Vec::new());
        assert!(diagrams_equal(&a, &b));
        assert_eq!(b.num_dims(), 1);
        let c = PersistenceDiagram::from_points(IntervalConvention::HalfOpen, [(0, g(0.0), Grade::INFINITY)]);
        assert!(!diagrams_equal(&a, &c));
    }

    #[test]
    fn points_stay_sorted() {
        let d = PersistenceDiagram::from_points(
            IntervalConvention::HalfOpen,
            [(1, g(2.0), g(3.0)), (1, g(0.5), Grade::INFINITY), (1, g(0.5), g(1.0))],
        );
        let births: Vec<_> = d.dimension(1).iter().map(|i| (i.birth.value(), i.death.value())).collect();
        assert_eq!(births, vec![(0.5, 1.0), (0.5, f64::INFINITY), (2.0, 3.0)]);
    }
}
