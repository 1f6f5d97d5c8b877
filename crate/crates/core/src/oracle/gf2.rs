//! Dense linear algebra over Z/2.

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i);
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Highest set index.
    pub fn pivot(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Row-echelon basis keyed by pivot. Every row carries a tag that records
/// which combination of inserted vectors it represents.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<(BitVec, BitVec)>,
    by_pivot: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `(v, tag)` in place against the basis.
    pub fn reduce(&self, v: &mut BitVec, tag: &mut BitVec) {
        while let Some(p) = v.pivot() {
            match self.by_pivot.get(&p) {
                Some(&r) => {
                    v.xor(&self.rows[r].0);
                    tag.xor(&self.rows[r].1);
                }
                None => break,
            }
        }
    }

    /// Reduces and inserts. A dependent vector is rejected with the tag of
    /// the combination that cancels it.
    pub fn insert(&mut self, mut v: BitVec, mut tag: BitVec) -> Result<(), BitVec> {
        self.reduce(&mut v, &mut tag);
        match v.pivot() {
            Some(p) => {
                self.by_pivot.insert(p, self.rows.len());
                self.rows.push((v, tag));
                Ok(())
            }
            None => Err(tag),
        }
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        while let Some(p) = v.pivot() {
            match self.by_pivot.get(&p) {
                Some(&r) => v.xor(&self.rows[r].0),
                None => return false,
            }
        }
        true
    }
}

/// Rank of a set of vectors.
pub fn rank<'a>(vectors: impl IntoIterator<Item = &'a BitVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        let _ = e.insert(v.clone(), BitVec::zeros(0));
    }
    e.rank()
}

/// Basis of `{x : row · x = 0 for every row}` for vectors of length `n`.
pub fn nullspace(rows: &[BitVec], n: usize) -> Vec<BitVec> {
    // Gauss-Jordan to reduced row echelon form.
    let mut rows: Vec<BitVec> = rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(k) = (r..rows.len()).find(|&k| rows[k].get(col)) else {
            continue;
        };
        rows.swap(r, k);
        for k in 0..rows.len() {
            if k != r && rows[k].get(col) {
                let pivot_row = rows[r].clone();
                rows[k].xor(&pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = BitVec::unit(n, free);
            for (row, &pc) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    x.set(pc);
                }
            }
            x
        })
        .collect()
}
