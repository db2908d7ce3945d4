//! Dense matrices over the two-element field with bit-packed rows.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// A `rows x cols` matrix over GF(2). Row `r` occupies `stride` 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Gf2Matrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. `cols` is explicit so that `0 x n` shapes survive.
    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Option<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return None;
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(r, c, true),
                    _ => return None,
                }
            }
        }
        Some(m)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) as u8).collect())
            .collect()
    }

    /// Matrix whose entries are the low `rows * cols` bits of `code`, row-major.
    /// Only meaningful for `rows * cols <= 64`.
    pub fn from_code(rows: usize, cols: usize, code: u64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if (code >> (r * cols + c)) & 1 == 1 {
                    m.set(r, c, true);
                }
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

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for k in 0..self.stride {
            let v = self.bits[src * self.stride + k];
            self.bits[dst * self.stride + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.stride {
                self.bits.swap(a * self.stride + k, b * self.stride + k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// `self * rhs`. Panics if the inner dimensions disagree.
    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, rhs.rows, "gf2 product shape mismatch");
        let mut out = Gf2Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for w in 0..out.stride {
                        out.bits[r * out.stride + w] ^= rhs.bits[k * rhs.stride + w];
                    }
                }
            }
        }
        out
    }

    /// Entrywise sum (XOR).
    pub fn add(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.shape(), rhs.shape(), "gf2 sum shape mismatch");
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&rhs.bits) {
            *a ^= *b;
        }
        out
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce()
    }

    /// Reduces in place to reduced row echelon form and returns the rank.
    fn row_reduce(&mut self) -> usize {
        self.row_reduce_prefix(self.cols)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Gf2Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Gf2Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, true);
        }
        if aug.row_reduce_prefix(n) < n {
            return None;
        }
        let mut inv = Gf2Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    /// Row reduction pivoting only in the first `pivot_cols` columns.
    fn row_reduce_prefix(&mut self, pivot_cols: usize) -> usize {
        let mut rank = 0;
        for c in 0..pivot_cols.min(self.cols) {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(p, rank);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// True when every row and every column holds at most one 1.
    pub fn is_partial_permutation(&self) -> bool {
        let rows_ok =
            (0..self.rows).all(|r| self.row(r).iter().map(|w| w.count_ones()).sum::<u32>() <= 1);
        rows_ok && (0..self.cols).all(|c| (0..self.rows).filter(|&r| self.get(r, c)).count() <= 1)
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &Gf2Matrix) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        out
    }
}

impl Gf2Matrix {
    /// Basis of the right nullspace `{x : self * x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let rank = m.row_reduce();
        let mut pivots = Vec::with_capacity(rank);
        for r in 0..rank {
            let c = (0..m.cols)
                .find(|&c| m.get(r, c))
                .expect("pivot row is nonzero");
            pivots.push(c);
        }
        let mut is_pivot = vec![false; m.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..m.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::zeros(m.cols);
                v.set(free, true);
                for (r, &pc) in pivots.iter().enumerate() {
                    if m.get(r, free) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Entries in row-major order.
    pub fn to_bitvec(&self) -> BitVec {
        let mut v = BitVec::zeros(self.rows * self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    v.set(r * self.cols + c, true);
                }
            }
        }
        v
    }
}

/// A fixed-length vector over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if v {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    /// Appends `other` after the last bit of `self`.
    pub fn extend_from(&mut self, other: &BitVec) {
        let start = self.len;
        self.len += other.len;
        self.words.resize(words_for(self.len), 0);
        for i in 0..other.len {
            if other.get(i) {
                self.set(start + i, true);
            }
        }
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Matrix({}x{})[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(" ")?;
            }
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            if r + 1 < self.rows {
                f.write_str(";")?;
            }
        }
        f.write_str("]")
    }
}

/// All invertible `n x n` matrices over GF(2). Intended for `n <= 4`.
pub fn general_linear_group(n: usize) -> Vec<Gf2Matrix> {
    assert!(n <= 4, "enumerating GL(n, 2) only for n <= 4");
    (0..1u64 << (n * n))
        .map(|code| Gf2Matrix::from_code(n, n, code))
        .filter(Gf2Matrix::is_invertible)
        .collect()
}
