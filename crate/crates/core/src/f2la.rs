//! Dense, bit-packed linear algebra over F2.
//!
//! Matrices are stored row-major with every row padded to a whole number of
//! 64-bit words. Vectors are row vectors unless an operation says otherwise;
//! `BitMatrix::mul_vec` treats its argument as a column vector.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial degree {degree} does not fit lift size {ell}")]
    DegreeTooLarge { degree: usize, ell: usize },
    #[error("matrix size must be at least 1")]
    EmptySize,
}

/// A vector over F2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Parses a string of `0`/`1` characters; any other character is skipped.
    pub fn from_bitstring(s: &str) -> Self {
        let bits: Vec<bool> = s
            .chars()
            .filter(|c| *c == '0' || *c == '1')
            .map(|c| c == '1')
            .collect();
        Self::from_bools(&bits)
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { words, len }
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
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in and");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        BitVec::from_words(words, self.len)
    }

    pub fn or(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch in or");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        BitVec::from_words(words, self.len)
    }

    /// Inner product over F2.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        dot_words(&self.words, &other.words)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bits `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        assert!(start <= end && end <= self.len);
        BitVec::from_indices(
            end - start,
            self.iter_ones()
                .filter(|&i| i >= start && i < end)
                .map(|i| i - start),
        )
    }

    pub fn select(&self, indices: &[usize]) -> BitVec {
        BitVec::from_indices(
            indices.len(),
            indices
                .iter()
                .enumerate()
                .filter(|(_, &i)| self.get(i))
                .map(|(j, _)| j),
        )
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_bitstring())
    }
}

#[inline]
fn dot_words(a: &[u64], b: &[u64]) -> bool {
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc ^= x & y;
    }
    acc.count_ones() & 1 == 1
}

/// Dense matrix over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows of the reduced form; row `i` has its leading one at `pivots[i]`.
    pub basis: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` in place against the basis and returns the combination used.
    pub fn reduce(&self, v: &mut BitVec) -> BitVec {
        assert_eq!(v.len(), self.basis.cols, "length mismatch in reduce");
        let mut used = BitVec::zeros(self.pivots.len());
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                let row = self.basis.row_words(i);
                for (a, b) in v.words.iter_mut().zip(row) {
                    *a ^= *b;
                }
                used.set(i, true);
            }
        }
        used
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, true);
            }
        }
        m
    }

    /// Builds a matrix from row vectors, all of length `cols`.
    pub fn from_rows(rows: &[BitVec], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(&r.words);
        }
        m
    }

    /// Builds a matrix from nested 0/1 values.
    pub fn from_dense<T: AsRef<[u8]>>(rows: &[T], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            for (j, &b) in r.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Parses rows written as strings of `0`/`1` (other characters ignored).
    pub fn from_bitstrings(rows: &[&str]) -> Self {
        let vecs: Vec<BitVec> = rows.iter().map(|s| BitVec::from_bitstring(s)).collect();
        let cols = vecs.first().map_or(0, |v| v.len());
        Self::from_rows(&vecs, cols)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.row_words(r).to_vec(), self.cols)
    }

    pub fn row_vecs(&self) -> Vec<BitVec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.row_words_mut(r).copy_from_slice(&v.words);
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        if src == dst {
            self.row_words_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (y, x) in b.iter_mut().zip(a) {
            *y ^= *x;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows).map(|r| self.row_weight(r)).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut out = vec![0; self.cols];
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                out[c] += 1;
            }
        }
        out
    }

    pub fn max_row_weight(&self) -> usize {
        self.row_weights().into_iter().max().unwrap_or(0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(r).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| *w == 0)
    }

    pub fn is_row_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|w| *w == 0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {:?} by {:?}",
            self.shape(),
            other.shape()
        );
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row_ones(r).collect::<Vec<_>>() {
                let src = other.row_words(k);
                let dst = &mut out.data[r * out.stride..(r + 1) * out.stride];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= *s;
                }
            }
        }
        out
    }

    /// `self · v` with `v` a column vector.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "matrix-vector length mismatch");
        BitVec::from_indices(
            self.rows,
            (0..self.rows).filter(|&r| dot_words(self.row_words(r), &v.words)),
        )
    }

    /// `v · self` with `v` a row vector.
    pub fn vec_mul(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.rows, v.len(), "vector-matrix length mismatch");
        let mut out = BitVec::zeros(self.cols);
        for r in v.iter_ones() {
            for (a, b) in out.words.iter_mut().zip(self.row_words(r)) {
                *a ^= *b;
            }
        }
        out
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= *b;
        }
        out
    }

    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                out.set(r, c, true);
            }
            for c in other.row_ones(r) {
                out.set(r, self.cols + c, true);
            }
        }
        out
    }

    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        }
    }

    /// Assembles a block matrix. `None` blocks are zero; each block row needs
    /// at least one concrete block to fix its height, likewise per block column.
    pub fn block(blocks: &[Vec<Option<&BitMatrix>>]) -> BitMatrix {
        let nbr = blocks.len();
        let nbc = blocks.first().map_or(0, |r| r.len());
        let mut heights = vec![None; nbr];
        let mut widths = vec![None; nbc];
        for (i, brow) in blocks.iter().enumerate() {
            assert_eq!(brow.len(), nbc, "ragged block layout");
            for (j, b) in brow.iter().enumerate() {
                if let Some(m) = b {
                    match heights[i] {
                        None => heights[i] = Some(m.rows),
                        Some(h) => assert_eq!(h, m.rows, "block row {i} height mismatch"),
                    }
                    match widths[j] {
                        None => widths[j] = Some(m.cols),
                        Some(w) => assert_eq!(w, m.cols, "block column {j} width mismatch"),
                    }
                }
            }
        }
        let heights: Vec<usize> = heights.into_iter().map(|h| h.unwrap_or(0)).collect();
        let widths: Vec<usize> = widths.into_iter().map(|w| w.unwrap_or(0)).collect();
        Self::block_sized(blocks, &heights, &widths)
    }

    /// Block assembly with explicit block heights and widths.
    pub fn block_sized(
        blocks: &[Vec<Option<&BitMatrix>>],
        heights: &[usize],
        widths: &[usize],
    ) -> BitMatrix {
        let total_r: usize = heights.iter().sum();
        let total_c: usize = widths.iter().sum();
        let mut out = BitMatrix::zeros(total_r, total_c);
        let mut r0 = 0;
        for (i, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (j, b) in brow.iter().enumerate() {
                if let Some(m) = b {
                    assert_eq!(m.shape(), (heights[i], widths[j]), "block ({i},{j}) shape");
                    for r in 0..m.rows {
                        for c in m.row_ones(r) {
                            out.set(r0 + r, c0 + c, true);
                        }
                    }
                }
                c0 += widths[j];
            }
            r0 += heights[i];
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        out
    }

    pub fn column_range(&self, start: usize, end: usize) -> BitMatrix {
        let cols: Vec<usize> = (start..end).collect();
        self.select_columns(&cols)
    }

    pub fn push_row(&mut self, v: &BitVec) {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(&v.words);
        self.rows += 1;
    }

    /// Indices of nonzero rows.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&r| !self.is_row_zero(r)).collect()
    }

    /// In-place Gauss–Jordan elimination visiting columns in `order`.
    /// Returns pivot columns; after the call rows `0..rank` are the reduced
    /// basis with row `i` pivoting on the `i`-th returned column.
    pub fn reduce_in_order(&mut self, order: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in order {
            if r == self.rows {
                break;
            }
            let w = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (r..self.rows).find(|&i| self.data[i * self.stride + w] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(p, r);
            for i in 0..self.rows {
                if i != r && self.data[i * self.stride + w] & mask != 0 {
                    self.add_row(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce_in_order(0..self.cols);
        let basis = m.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        Echelon { basis, pivots }
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> BitMatrix {
        self.echelon().basis
    }

    pub fn rank(&self) -> usize {
        // row and column rank agree; eliminate over the shorter side
        if self.cols < self.rows {
            self.transpose().rank()
        } else {
            let mut m = self.clone();
            m.reduce_in_order(0..self.cols).len()
        }
    }

    /// Basis of `{x : self · x = 0}` as rows.
    pub fn nullspace(&self) -> BitMatrix {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = BitMatrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, true);
            for (i, &p) in ech.pivots.iter().enumerate() {
                if ech.basis.get(i, f) {
                    out.set(k, p, true);
                }
            }
        }
        out
    }

    /// Basis of `{y : y · self = 0}` as rows, i.e. the nullspace of the transpose.
    pub fn left_nullspace(&self) -> BitMatrix {
        self.transpose().nullspace()
    }

    pub fn row_space_contains(&self, v: &BitVec) -> Result<bool, F2Error> {
        if v.len() != self.cols {
            return Err(F2Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self.echelon().contains(v))
    }

    /// True when `self` and `other` span the same row space.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let a = self.echelon();
        let b = other.echelon();
        a.pivots == b.pivots && a.basis == b.basis
    }

    /// True when every row of `other` lies in the row space of `self`.
    pub fn row_space_includes(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let e = self.echelon();
        (0..other.rows).all(|r| e.contains(&other.row(r)))
    }

    /// Solves `self · x = b` for a column vector `x`.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, F2Error> {
        if b.len() != self.rows {
            return Err(F2Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = self.hstack(&BitMatrix::from_rows(
            &b.iter_bits().map(|x| BitVec::from_bools(&[x])).collect::<Vec<_>>(),
            1,
        ));
        let pivots = aug.reduce_in_order(0..self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            if aug.get(i, self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&BitMatrix::identity(n));
        let pivots = aug.reduce_in_order(0..n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.column_range(n, 2 * n))
    }

    /// Kronecker product.
    pub fn kron(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
        for i in 0..a.rows {
            for j in a.row_ones(i) {
                for k in 0..b.rows {
                    for l in b.row_ones(k) {
                        out.set(i * b.rows + k, j * b.cols + l, true);
                    }
                }
            }
        }
        out
    }

    /// Uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen::<bool>() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Uniformly random invertible `n × n` matrix drawn from `rng`.
    pub fn random_invertible_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
        loop {
            let m = BitMatrix::random(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// Uniformly random invertible `n × n` matrix, deterministic in `seed`.
    pub fn random_invertible(n: usize, seed: u64) -> Result<BitMatrix, F2Error> {
        if n == 0 {
            return Err(F2Error::EmptySize);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self::random_invertible_with(n, &mut rng))
    }
}

impl BitVec {
    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r).to_bitstring())?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<&str> = (0..self.cols)
                .map(|c| if self.get(r, c) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Coefficients of the ring transpose `g_0 + g_{ℓ-1} x + … + g_1 x^{ℓ-1}`.
pub fn ring_transpose(poly: &[bool], ell: usize) -> Vec<bool> {
    let mut out = vec![false; ell];
    for (i, &c) in poly.iter().enumerate() {
        if c {
            out[(ell - i) % ell] = true;
        }
    }
    out
}

/// The `ℓ × ℓ` circulant whose `i`-th column holds the coefficients of
/// `x^i · g(x) mod (x^ℓ - 1)`.
pub fn circulant_lift(poly: &[bool], ell: usize) -> Result<BitMatrix, F2Error> {
    if let Some(deg) = poly.iter().rposition(|&c| c) {
        if deg >= ell {
            return Err(F2Error::DegreeTooLarge { degree: deg, ell });
        }
    }
    let mut m = BitMatrix::zeros(ell, ell);
    for (k, &c) in poly.iter().enumerate() {
        if c {
            for col in 0..ell {
                m.set((k + col) % ell, col, true);
            }
        }
    }
    Ok(m)
}
