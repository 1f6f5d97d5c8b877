//! Zigzag persistence by brute force.
//!
//! The complexes of a zigzag are listed as positions `G_0, G_0', G_1, G_1',
//! ...` on a grid of grades. Homology is computed at every position, each
//! arrow becomes a matrix, and interval multiplicities are read off the
//! ranks of the limit-to-colimit maps of all sub-zigzags by inclusion-
//! exclusion. Cubic in everything; meant for a few dozen positions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::diagram::{Interval, IntervalConvention, PersistenceDiagram};
use super::flag::{cliques, OracleError, DEFAULT_SIMPLEX_BUDGET};
use super::gf2::{nullspace, rank, BitVec, Echelon};
use crate::grade::{Grade, VertexId};
use crate::zigzag::{pair_events, ZigzagFiltration};

/// Closed-interval diagram of `z` in dimensions `0..=max_dim`, on the grid
/// of its own grades.
pub fn zigzag_persistence(z: &ZigzagFiltration, max_dim: usize) -> Result<PersistenceDiagram, OracleError> {
    zigzag_persistence_on_grid(z, &z.grades(), max_dim)
}

/// Like [`zigzag_persistence`], with positions taken on `grid`, which must
/// contain every grade of `z`. Two zigzags are comparable position by
/// position once they share a grid.
pub fn zigzag_persistence_on_grid(
    z: &ZigzagFiltration,
    grid: &[Grade],
    max_dim: usize,
) -> Result<PersistenceDiagram, OracleError> {
    let mut grid = grid.to_vec();
    grid.sort();
    grid.dedup();
    let ix = |g: Grade| grid.binary_search(&g).map_err(|_| OracleError::GradeOffGrid(g));
    let mut births: HashMap<VertexId, usize> = HashMap::new();
    for (&v, &b) in z.births() {
        births.insert(v, ix(b)?);
    }
    let mut spans: HashMap<(VertexId, VertexId), Vec<(usize, Option<usize>)>> = HashMap::new();
    for p in pair_events(z) {
        let rem = p.removal.map(ix).transpose()?;
        spans.entry((p.u, p.v)).or_default().push((ix(p.inclusion)?, rem));
    }
    let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> = births.keys().map(|&v| (v, BTreeSet::new())).collect();
    for &(u, v) in spans.keys() {
        adjacency.get_mut(&u).unwrap().insert(v);
        adjacency.get_mut(&v).unwrap().insert(u);
    }
    let all = cliques(&adjacency, max_dim + 2, DEFAULT_SIMPLEX_BUDGET)?;

    let positions = 2 * grid.len();
    let present = |s: &[VertexId], p: usize| -> bool {
        let (k, primed) = (p / 2, p % 2 == 1);
        s.iter().all(|v| births[v] <= k)
            && s.iter().enumerate().all(|(i, &a)| {
                s[i + 1..].iter().all(|&b| {
                    spans[&(a, b)].iter().any(|&(inc, rem)| {
                        inc <= k
                            && match rem {
                                None => true,
                                Some(r) if primed => k < r,
                                Some(r) => k <= r,
                            }
                    })
                })
            })
    };

    let mut by_dim: Vec<Vec<Vec<VertexId>>> = vec![Vec::new(); max_dim + 2];
    for s in all {
        by_dim[s.len() - 1].push(s);
    }
    let index: Vec<HashMap<&[VertexId], usize>> = by_dim
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
        .collect();
    let boundary = |d: usize, s: &[VertexId]| -> BitVec {
        let len = by_dim[d - 1].len();
        BitVec::from_indices(
            len,
            (0..s.len()).map(|skip| {
                let face: Vec<VertexId> =
                    s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                index[d - 1][face.as_slice()]
            }),
        )
    };

    let mut diagram = PersistenceDiagram::new(IntervalConvention::Closed);
    for d in 0..=max_dim {
        let homology: Vec<Homology> = (0..positions)
            .map(|p| {
                let cells: Vec<usize> = (0..by_dim[d].len()).filter(|&i| present(&by_dim[d][i], p)).collect();
                let cycles = cycle_basis(d, &cells, by_dim[d].len(), |s| boundary(d, &by_dim[d][s]));
                let boundaries: Vec<BitVec> = by_dim[d + 1]
                    .iter()
                    .filter(|s| present(s, p))
                    .map(|s| boundary(d + 1, s))
                    .collect();
                Homology::new(boundaries, cycles)
            })
            .collect();
        let arrows: Vec<Arrow> = (0..positions.saturating_sub(1))
            .map(|p| {
                // G_k' sits inside G_k, and G_k' inside G_{k+1}.
                let (src, dst) = if p % 2 == 0 { (p + 1, p) } else { (p, p + 1) };
                let images = homology[src].reps.iter().map(|z| homology[dst].coordinates(z)).collect();
                Arrow { src, dst, images }
            })
            .collect();
        let dims: Vec<usize> = homology.iter().map(|h| h.reps.len()).collect();
        for (i, j, mult) in decompose(&dims, &arrows) {
            for _ in 0..mult {
                diagram.push(d, Interval::new(grid[i / 2], grid[j / 2]));
            }
        }
    }
    Ok(diagram)
}

/// Cycle space of the `d`-chains supported on `cells`, in global coordinates.
fn cycle_basis(d: usize, cells: &[usize], len: usize, boundary: impl Fn(usize) -> BitVec) -> Vec<BitVec> {
    if d == 0 {
        return cells.iter().map(|&c| BitVec::unit(len, c)).collect();
    }
    let cols: Vec<BitVec> = cells.iter().map(|&c| boundary(c)).collect();
    let faces: BTreeSet<usize> = cols.iter().flat_map(|c| c.ones().collect::<Vec<_>>()).collect();
    let rows: Vec<BitVec> = faces
        .iter()
        .map(|&f| BitVec::from_indices(cells.len(), (0..cells.len()).filter(|&j| cols[j].get(f))))
        .collect();
    nullspace(&rows, cells.len())
        .into_iter()
        .map(|x| BitVec::from_indices(len, x.ones().map(|j| cells[j])))
        .collect()
}

/// Homology in one dimension at one position: representative cycles and an
/// echelon basis that expresses any cycle in terms of them.
struct Homology {
    basis: Echelon,
    reps: Vec<BitVec>,
    /// Positions in the tag space of the accepted representatives.
    slot: Vec<Option<usize>>,
}

impl Homology {
    fn new(boundaries: Vec<BitVec>, cycles: Vec<BitVec>) -> Self {
        let width = cycles.len();
        let mut basis = Echelon::new();
        for b in boundaries {
            let _ = basis.insert(b, BitVec::zeros(width));
        }
        let mut reps = Vec::new();
        let mut slot = vec![None; width];
        for (c, z) in cycles.into_iter().enumerate() {
            if basis.insert(z.clone(), BitVec::unit(width, c)).is_ok() {
                slot[c] = Some(reps.len());
                reps.push(z);
            }
        }
        Homology { basis, reps, slot }
    }

    fn coordinates(&self, z: &BitVec) -> BitVec {
        let mut v = z.clone();
        let mut tag = BitVec::zeros(self.slot.len());
        self.basis.reduce(&mut v, &mut tag);
        debug_assert!(v.is_zero(), "not a cycle of this complex");
        BitVec::from_indices(self.reps.len(), tag.ones().map(|c| self.slot[c].expect("representative")))
    }
}

/// Linear map between neighboring positions; `images[c]` is the image of
/// the `c`-th basis class of `src`.
struct Arrow {
    src: usize,
    dst: usize,
    images: Vec<BitVec>,
}

/// Rank of the map from the limit to the colimit of the sub-zigzag on
/// positions `i..=j`.
fn generalized_rank(dims: &[usize], arrows: &[Arrow], i: usize, j: usize) -> usize {
    if dims[i..=j].contains(&0) {
        return 0;
    }
    let mut offset = vec![0; j - i + 2];
    for k in i..=j {
        offset[k - i + 1] = offset[k - i] + dims[k];
    }
    let n = offset[j - i + 1];
    let at = |k: usize, c: usize| offset[k - i] + c;
    let inner = &arrows[i..j];

    // Compatible families: image of x_src equals x_dst along every arrow.
    let mut constraints = Vec::new();
    for a in inner {
        for r in 0..dims[a.dst] {
            let mut row = BitVec::unit(n, at(a.dst, r));
            for (c, img) in a.images.iter().enumerate() {
                if img.get(r) {
                    row.flip(at(a.src, c));
                }
            }
            constraints.push(row);
        }
    }
    let limit = nullspace(&constraints, n);

    // Colimit relations: e_src(c) ~ e_dst(image of c).
    let relations: Vec<BitVec> = inner
        .iter()
        .flat_map(|a| {
            a.images.iter().enumerate().map(move |(c, img)| {
                let mut v = BitVec::unit(n, at(a.src, c));
                for r in img.ones() {
                    v.flip(at(a.dst, r));
                }
                v
            })
        })
        .collect();
    let images: Vec<BitVec> = limit
        .iter()
        .map(|x| BitVec::from_indices(n, (0..dims[i]).filter(|&c| x.get(at(i, c))).map(|c| at(i, c))))
        .collect();
    rank(relations.iter().chain(&images)) - rank(&relations)
}

/// Interval multiplicities `(first position, last position, count)`.
fn decompose(dims: &[usize], arrows: &[Arrow]) -> Vec<(usize, usize, usize)> {
    let p = dims.len();
    let mut g = vec![vec![0usize; p]; p];
    for i in 0..p {
        for j in i..p {
            g[i][j] = generalized_rank(dims, arrows, i, j);
            if g[i][j] == 0 {
                break;
            }
        }
    }
    let at = |i: isize, j: usize| -> isize {
        if i < 0 || j >= p {
            0
        } else {
            g[i as usize][j] as isize
        }
    };
    let mut out = Vec::new();
    for i in 0..p {
        for j in i..p {
            let m = at(i as isize, j) - at(i as isize - 1, j) - at(i as isize, j + 1) + at(i as isize - 1, j + 1);
            debug_assert!(m >= 0);
            if m > 0 {
                out.push((i, j, m as usize));
            }
        }
    }
    out
}

/// Converts the closed diagram of a zigzag without removals, computed on
/// `grid`, to the half-open convention of ordinary persistence: a class
/// last seen at a grade dies at the next grid grade, or never if that was
/// the last one.
pub fn closed_to_half_open(d: &PersistenceDiagram, grid: &[Grade]) -> PersistenceDiagram {
    let mut grid = grid.to_vec();
    grid.sort();
    grid.dedup();
    PersistenceDiagram::from_points(
        IntervalConvention::HalfOpen,
        d.points().map(|(dim, i)| {
            let k = grid.partition_point(|&g| g <= i.death);
            (dim, i.birth, grid.get(k).copied().unwrap_or(Grade::INFINITY))
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zigzag::ZigzagEvent;

    fn g(x: f64) -> Grade {
        Grade::from_f64(x)
    }

    #[test]
    fn flashing_cycle() {
        // The square 0-1-2-3 closes at 2, opens when edge 12 leaves at 3 and
        // closes again at 4: two separate classes.
        let z = ZigzagFiltration::new(
            [],
            [
                ZigzagEvent::inclusion(0, 1, g(1.0)).unwrap(),
                ZigzagEvent::inclusion(1, 2, g(1.0)).unwrap(),
                ZigzagEvent::inclusion(2, 3, g(1.0)).unwrap(),
                ZigzagEvent::inclusion(0, 3, g(2.0)).unwrap(),
                ZigzagEvent::removal(1, 2, g(3.0)).unwrap(),
                ZigzagEvent::inclusion(1, 2, g(4.0)).unwrap(),
            ],
        )
        .unwrap();
        let d = zigzag_persistence(&z, 1).unwrap();
        assert_eq!(d.dimension(0), &[Interval::new(g(1.0), g(4.0))]);
        assert_eq!(d.dimension(1), &[Interval::new(g(2.0), g(3.0)), Interval::new(g(4.0), g(4.0))]);
    }

    #[test]
    fn off_grid_grades_are_rejected() {
        let z = ZigzagFiltration::new([], [ZigzagEvent::inclusion(0, 1, g(1.0)).unwrap()]).unwrap();
        assert_eq!(zigzag_persistence_on_grid(&z, &[g(2.0)], 0), Err(OracleError::GradeOffGrid(g(1.0))));
    }
}
