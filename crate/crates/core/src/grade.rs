//! Scalar types shared by every module: vertex identifiers and filtration grades.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Identifier of a vertex. Identity is by value; identifiers need not be dense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for VertexId {
    fn from(id: u32) -> Self {
        VertexId(id)
    }
}

/// A filtration value.
///
/// Grades are totally ordered and compared exactly: two grades are the same
/// only when their bit patterns agree (after folding `-0.0` into `0.0`).
/// `NaN` is rejected at construction, and `+inf` stands for "never present".
#[derive(Clone, Copy)]
pub struct Grade(f64);

impl Grade {
    pub const INFINITY: Grade = Grade(f64::INFINITY);
    pub const NEG_INFINITY: Grade = Grade(f64::NEG_INFINITY);
    pub const ZERO: Grade = Grade(0.0);

    /// Returns `None` for `NaN`.
    pub fn new(value: f64) -> Option<Grade> {
        if value.is_nan() {
            None
        } else if value == 0.0 {
            Some(Grade(0.0))
        } else {
            Some(Grade(value))
        }
    }

    /// Panics on `NaN`; intended for literals and values already validated.
    pub fn from_f64(value: f64) -> Grade {
        Grade::new(value).expect("grade must not be NaN")
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl PartialEq for Grade {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Grade {}

impl PartialOrd for Grade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Grade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Grade {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state)
    }
}

impl fmt::Debug for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Shortest decimal representation that parses back to the same bits;
/// infinities print as `inf` / `-inf`.
impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid grade {0:?}")]
pub struct ParseGradeError(pub String);

impl FromStr for Grade {
    type Err = ParseGradeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let value: f64 = match s {
            "inf" | "+inf" | "infinity" | "Infinity" => f64::INFINITY,
            "-inf" | "-infinity" | "-Infinity" => f64::NEG_INFINITY,
            _ => s.parse().map_err(|_| ParseGradeError(s.to_string()))?,
        };
        Grade::new(value).ok_or_else(|| ParseGradeError(s.to_string()))
    }
}

impl From<Grade> for f64 {
    fn from(g: Grade) -> f64 {
        g.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_total_and_exact() {
        let a = Grade::from_f64(1.0);
        let b = Grade::from_f64(1.0 + f64::EPSILON);
        assert!(a < b);
        assert_ne!(a, b);
        assert!(b < Grade::INFINITY);
        assert_eq!(Grade::from_f64(-0.0), Grade::ZERO);
    }

    #[test]
    fn nan_is_rejected() {
        assert!(Grade::new(f64::NAN).is_none());
        assert!("nan".parse::<Grade>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2f64.sqrt(), 1e-300, 123456789.125, f64::INFINITY] {
            let g = Grade::from_f64(v);
            let back: Grade = g.to_string().parse().unwrap();
            assert_eq!(g, back);
        }
        assert_eq!(Grade::INFINITY.to_string(), "inf");
    }
}
