//! Exact bottleneck distance between two diagrams in one dimension.

use super::diagram::{Interval, PersistenceDiagram};
use crate::grade::Grade;

fn linf(a: &Interval, b: &Interval) -> f64 {
    (a.birth.value() - b.birth.value()).abs().max((a.death.value() - b.death.value()).abs())
}

fn to_diagonal(a: &Interval) -> f64 {
    a.persistence() / 2.0
}

/// Bottleneck distance between the dimension-`dim` parts of `a` and `b`.
///
/// Essential points are matched among themselves by sorted birth; if their
/// counts differ the distance is infinite. Finite points may be matched to
/// each other or to the diagonal.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize) -> Grade {
    let (ea, fa): (Vec<Interval>, Vec<Interval>) = a.dimension(dim).iter().partition(|i| i.is_essential());
    let (eb, fb): (Vec<Interval>, Vec<Interval>) = b.dimension(dim).iter().partition(|i| i.is_essential());
    if ea.len() != eb.len() {
        return Grade::INFINITY;
    }
    // Both lists are sorted by birth already.
    let essential = ea.iter().zip(&eb).map(|(x, y)| (x.birth.value() - y.birth.value()).abs()).fold(0.0, f64::max);
    Grade::from_f64(essential.max(finite_bottleneck(&fa, &fb)))
}

/// Bottleneck distance between finite point sets, by binary search over the
/// candidate radii and a perfect-matching test on the augmented bipartite
/// graph (each point may also go to its own diagonal projection).
pub(crate) fn finite_bottleneck(a: &[Interval], b: &[Interval]) -> f64 {
    let (m, n) = (a.len(), b.len());
    let size = m + n;
    if size == 0 {
        return 0.0;
    }
    // Left: a_0..a_m, then diagonal copies of b. Right: b_0..b_n, then
    // diagonal copies of a.
    let cost = |l: usize, r: usize| -> Option<f64> {
        match (l < m, r < n) {
            (true, true) => Some(linf(&a[l], &b[r])),
            (true, false) => (r - n == l).then(|| to_diagonal(&a[l])),
            (false, true) => (l - m == r).then(|| to_diagonal(&b[r])),
            (false, false) => Some(0.0),
        }
    };
    let mut candidates: Vec<f64> = (0..size)
        .flat_map(|l| (0..size).filter_map(move |r| cost(l, r)))
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |radius: f64| {
        let adj: Vec<Vec<usize>> =
            (0..size).map(|l| (0..size).filter(|&r| cost(l, r).is_some_and(|c| c <= radius)).collect()).collect();
        has_perfect_matching(&adj, size)
    };
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Kuhn's augmenting-path algorithm.
fn has_perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    fn augment(l: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    (0..adj.len()).all(|l| {
        let mut seen = vec![false; right];
        augment(l, adj, &mut seen, &mut owner)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::diagram::IntervalConvention;

    fn diag(points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_points(
            IntervalConvention::HalfOpen,
            points.iter().map(|&(b, d)| (0, Grade::from_f64(b), Grade::from_f64(d))),
        )
    }

    #[test]
    fn basic_distances() {
        let a = diag(&[(0.0, 2.0)]);
        let empty = diag(&[]);
        assert_eq!(bottleneck_distance(&a, &a, 0).value(), 0.0);
        assert_eq!(bottleneck_distance(&a, &empty, 0).value(), 1.0);
        assert_eq!(bottleneck_distance(&a, &diag(&[(0.5, 2.0)]), 0).value(), 0.5);
        // Cheaper to send both to the diagonal than to pair them.
        assert_eq!(bottleneck_distance(&diag(&[(0.0, 0.25)]), &diag(&[(5.0, 5.5)]), 0).value(), 0.25);
    }

    #[test]
    fn essential_points() {
        let a = diag(&[(0.0, f64::INFINITY), (1.0, 2.0)]);
        let b = diag(&[(0.25, f64::INFINITY)]);
        assert_eq!(bottleneck_distance(&a, &b, 0).value(), 0.5);
        assert!(bottleneck_distance(&a, &diag(&[(1.0, 2.0)]), 0).is_infinite());
    }
}
