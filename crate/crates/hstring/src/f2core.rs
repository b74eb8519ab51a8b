//! Mod-2 combinatorics and bit-packed linear algebra over F2.
//!
//! Binomial parities follow Lucas' theorem: `C(n, m)` is odd exactly when
//! the set bits of `m` are a subset of the set bits of `n`.

use std::fmt;

/// `C(n, m) mod 2`. Zero when `m > n`.
pub fn binom_parity(n: u64, m: u64) -> bool {
    m <= n && m & !n == 0
}

/// Parity of the multinomial coefficient `(Σ parts)! / Π parts!`.
///
/// Odd iff the binary expansions of the parts are pairwise disjoint.
pub fn multinomial_parity(parts: &[u64]) -> bool {
    let mut seen = 0u64;
    for &p in parts {
        if seen & p != 0 {
            return false;
        }
        seen |= p;
    }
    true
}

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector over F2, packed 64 entries per word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = F2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = F2Vec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn add_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Index of the lowest set entry.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A dense matrix over F2, stored row-major with each row bit-packed.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        F2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = F2Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &x) in row.iter().enumerate() {
                if x & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[F2Vec]) -> Self {
        let mut m = F2Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    pub fn row(&self, i: usize) -> F2Vec {
        F2Vec {
            len: self.cols,
            words: self.data[i * self.stride..(i + 1) * self.stride].to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> F2Vec {
        let mut v = F2Vec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        let mut out = F2Vec::zeros(self.rows);
        for i in 0..self.rows {
            let row = &self.data[i * self.stride..(i + 1) * self.stride];
            let ones: u32 = row
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones % 2 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in self.row(i).ones() {
                let (src, dst) = (k * other.stride, i * out.stride);
                for w in 0..other.stride {
                    out.data[dst + w] ^= other.data[src + w];
                }
            }
        }
        out
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let s = self.stride;
        for w in 0..s {
            let x = self.data[src * s + w];
            self.data[dst * s + w] ^= x;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.data.swap(a * s + w, b * s + w);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(p, r);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank by row elimination.
    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Rank by column elimination, computed independently of [`F2Matrix::rank`].
    pub fn column_rank(&self) -> usize {
        let mut cols: Vec<F2Vec> = (0..self.cols).map(|j| self.column(j)).collect();
        let mut rank = 0;
        for i in 0..self.rows {
            let Some(p) = (rank..cols.len()).find(|&j| cols[j].get(i)) else {
                continue;
            };
            cols.swap(p, rank);
            let pivot = cols[rank].clone();
            for c in cols.iter_mut().skip(rank + 1) {
                if c.get(i) {
                    c.add_assign(&pivot);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Solves `M x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &F2Vec) -> Option<F2Vec> {
        assert_eq!(b.len(), self.rows, "dimension mismatch in solve");
        let mut aug = F2Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                aug.set(i, j, true);
            }
            if b.get(i) {
                aug.set(i, self.cols, true);
            }
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = F2Vec::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if aug.get(r, self.cols) {
                x.set(c, true);
            }
        }
        Some(x)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Rank and a kernel basis of `m`.
///
/// The kernel basis is returned in reduced echelon form: each vector has a
/// distinct free column set to one, and the vectors are sorted by it.
pub fn f2_rank_kernel(m: &F2Matrix) -> (usize, Vec<F2Vec>) {
    let mut r = m.clone();
    let pivots = r.rref();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = F2Vec::unit(m.cols(), free);
        for (row, &p) in pivots.iter().enumerate() {
            if r.get(row, free) {
                v.set(p, true);
            }
        }
        kernel.push(v);
    }
    (pivots.len(), kernel)
}

/// Incremental echelon basis of a subspace, with each stored vector tagged by
/// the combination of inserted "marked" vectors it came from.
///
/// Used to read off coordinates of homology classes: boundaries go in
/// unmarked, cycle representatives go in marked.
#[derive(Clone, Debug)]
pub struct Reducer {
    len: usize,
    marks: usize,
    rows: Vec<(usize, F2Vec, F2Vec)>,
}

impl Reducer {
    pub fn new(len: usize, marks: usize) -> Self {
        Reducer {
            len,
            marks,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`, returning the residue and the accumulated mark combination.
    pub fn reduce(&self, v: &F2Vec) -> (F2Vec, F2Vec) {
        assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        let mut tag = F2Vec::zeros(self.marks);
        for (p, row, t) in &self.rows {
            if v.get(*p) {
                v.add_assign(row);
                tag.add_assign(t);
            }
        }
        (v, tag)
    }

    /// Inserts `v` with the given mark (if any). Returns whether the span grew.
    pub fn insert(&mut self, v: &F2Vec, mark: Option<usize>) -> bool {
        let (res, mut tag) = self.reduce(v);
        if let Some(m) = mark {
            tag.flip(m);
        }
        let Some(p) = res.first_one() else {
            return false;
        };
        self.rows.push((p, res, tag));
        true
    }
}
