//! Approximate backward reduction. Each edge gets its first domination check
//! a little later than its own grade; an edge dominated there is shifted as
//! usual, any other edge stays where it was. The reduced persistence module
//! is interleaved with the original one within the chosen tolerance.

use crate::collapse::{BackwardSweep, CollapseResult, Outcome};
use crate::grade::Grade;
use crate::graph::{FilteredEdge, FilteredGraph};
use crate::neighborhood::{NeighborhoodMap, Representation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApproxParams {
    /// First check at `t + epsilon`.
    Additive { epsilon: f64 },
    /// First check at `alpha * t`; equivalent to the additive scheme with
    /// `ln alpha` on logarithmic grades.
    Multiplicative { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ApproxError {
    #[error("epsilon must be finite and non-negative, got {0}")]
    BadEpsilon(f64),
    #[error("alpha must be finite and at least 1, got {0}")]
    BadAlpha(f64),
    #[error("multiplicative mode needs positive grades, edge ({0}, {1}) has grade {2}")]
    NonPositiveGrade(u32, u32, Grade),
}

impl ApproxParams {
    pub fn additive(epsilon: f64) -> Result<Self, ApproxError> {
        let p = ApproxParams::Additive { epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn multiplicative(alpha: f64) -> Result<Self, ApproxError> {
        let p = ApproxParams::Multiplicative { alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ApproxError> {
        match *self {
            ApproxParams::Additive { epsilon } if !(epsilon.is_finite() && epsilon >= 0.0) => {
                Err(ApproxError::BadEpsilon(epsilon))
            }
            ApproxParams::Multiplicative { alpha } if !(alpha.is_finite() && alpha >= 1.0) => {
                Err(ApproxError::BadAlpha(alpha))
            }
            _ => Ok(()),
        }
    }

    /// True when the scheme degenerates to the exact algorithm.
    pub fn is_exact(&self) -> bool {
        match *self {
            ApproxParams::Additive { epsilon } => epsilon == 0.0,
            ApproxParams::Multiplicative { alpha } => alpha == 1.0,
        }
    }

    /// Grade of the first domination check for an edge born at `t`.
    pub fn first_check(&self, t: Grade) -> Grade {
        let v = match *self {
            ApproxParams::Additive { epsilon } => t.value() + epsilon,
            ApproxParams::Multiplicative { alpha } => t.value() * alpha,
        };
        // Rounding can never move the check below the edge itself.
        Grade::from_f64(v).max(t)
    }
}

pub fn approx_collapse(g: &FilteredGraph, params: ApproxParams) -> Result<CollapseResult, ApproxError> {
    approx_collapse_with(g, params, Representation::default())
}

/// Backward sweep (right to left, as the error bound requires) with a
/// delayed first check.
pub fn approx_collapse_with(
    g: &FilteredGraph,
    params: ApproxParams,
    repr: Representation,
) -> Result<CollapseResult, ApproxError> {
    params.validate()?;
    if let ApproxParams::Multiplicative { .. } = params {
        if let Some(e) = g.edges().iter().find(|e| e.t <= Grade::ZERO) {
            return Err(ApproxError::NonPositiveGrade(e.u.0, e.v.0, e.t));
        }
    }
    let mut sweep = BackwardSweep::new(NeighborhoodMap::from_graph(g, repr));
    let mut kept: Vec<FilteredEdge> = Vec::new();
    let mut removed = Vec::new();
    for e in g.edges().iter().rev() {
        let a = sweep.map.index_of(e.u).unwrap();
        let b = sweep.map.index_of(e.v).unwrap();
        match sweep.process(a, b, params.first_check(e.t), e.t) {
            Outcome::Kept(t) => kept.push(e.with_grade(t)),
            Outcome::Removed => removed.push(*e),
        }
    }
    Ok(CollapseResult::assemble(g, kept, removed, sweep.stats))
}
