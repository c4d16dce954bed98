//! Word-packed GF(2) vectors and incremental row reduction.

use std::fmt;

const WORD: usize = 64;

/// Fixed-length bit vector over GF(2), packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Grows (or shrinks) the vector; new bits are zero.
    pub fn resize(&mut self, len: usize) {
        self.words.resize(len.div_ceil(WORD), 0);
        self.len = len;
        let rem = len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Number of positions where both vectors are set.
    pub fn and_count(&self, other: &BitVec) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Incremental GF(2) row basis that remembers how each reduced row was
/// built from the inserted rows.
///
/// Rows are reduced in insertion order; each stored row has a distinct
/// pivot (its lowest set bit), and every stored row is zero on the pivots
/// of the rows stored before it.
#[derive(Clone, Debug)]
pub struct RowBasis {
    width: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    combos: Vec<BitVec>,
    inserted: usize,
}

impl RowBasis {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), inserted: 0 }
    }

    pub fn from_rows<'a>(width: usize, rows: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut b = Self::new(width);
        for r in rows {
            let _ = b.insert(r.clone());
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduces `v` against the basis. Returns the residual and the set of
    /// inserted rows whose sum was removed from `v`.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.inserted);
        for ((row, &p), c) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            if v.get(p) {
                v.xor_assign(row);
                let mut c = c.clone();
                c.resize(self.inserted);
                combo.xor_assign(&c);
            }
        }
        (v, combo)
    }

    /// Returns the subset of inserted rows summing to `v`, if `v` is in the span.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let (res, combo) = self.reduce(v);
        res.is_zero().then_some(combo)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts a row. Returns `Err(dependency)` when the row is already in
    /// the span; the dependency lists inserted rows (including this one)
    /// that sum to zero.
    pub fn insert(&mut self, v: BitVec) -> Result<usize, BitVec> {
        debug_assert_eq!(v.len(), self.width);
        let idx = self.inserted;
        self.inserted += 1;
        let (res, mut combo) = self.reduce(&v);
        combo.resize(self.inserted);
        combo.set(idx, true);
        match res.first_one() {
            None => Err(combo),
            Some(p) => {
                self.rows.push(res);
                self.pivots.push(p);
                self.combos.push(combo);
                Ok(idx)
            }
        }
    }
}

/// Rank of a set of rows.
pub fn rank(width: usize, rows: &[BitVec]) -> usize {
    RowBasis::from_rows(width, rows).rank()
}

/// Basis of the null space of the row set: every returned vector selects
/// rows summing to zero. The basis has `rows.len() - rank` elements.
pub fn left_nullspace(width: usize, rows: &[BitVec]) -> Vec<BitVec> {
    let mut basis = RowBasis::new(width);
    let mut deps = Vec::new();
    for r in rows {
        if let Err(mut d) = basis.insert(r.clone()) {
            d.resize(rows.len());
            deps.push(d);
        }
    }
    deps
}

/// Solves `x · M = target` where `M` has the given rows, i.e. finds a
/// subset of rows summing to `target`.
pub fn solve_combination(width: usize, rows: &[BitVec], target: &BitVec) -> Option<BitVec> {
    let basis = RowBasis::from_rows(width, rows);
    basis.express(target).map(|mut c| {
        c.resize(rows.len());
        c
    })
}

/// Transposes a row list of `width`-bit rows into `width` rows of `rows.len()` bits.
pub fn transpose(width: usize, rows: &[BitVec]) -> Vec<BitVec> {
    let mut out = vec![BitVec::zeros(rows.len()); width];
    for (i, r) in rows.iter().enumerate() {
        for j in r.ones() {
            out[j].set(i, true);
        }
    }
    out
}
