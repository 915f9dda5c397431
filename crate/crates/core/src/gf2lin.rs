//! Dense linear algebra over GF(2).
//!
//! Vectors are packed into 64-bit words. Matrices are stored row-major as a
//! list of packed rows. Pivoting is always leftmost column, topmost row, so
//! every reduction in the crate is reproducible bit for bit.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 2]>;

/// A packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Words,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        let mut words = Words::new();
        words.resize(len.div_ceil(64), 0);
        Self { words, len }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters; whitespace is ignored.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }

    /// Low `len` bits of `value`, bit `i` of the vector is bit `i` of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { value } else { value & ((1u64 << len) - 1) };
        }
        v
    }

    /// Packs the vector into an integer (bit `i` -> bit `i`). Requires `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64, "vector too long to pack into u64");
        self.words.first().copied().unwrap_or(0)
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
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn or(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        out
    }

    /// Number of positions where both vectors are 1.
    #[inline]
    pub fn and_count(&self, other: &BitVec) -> u32 {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum()
    }

    /// Inner product mod 2.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        self.and_count(other) & 1 == 1
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Bits at the listed positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(j, true);
            }
        }
        out
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let t = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense binary matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| BitVec::unit(n, i)).collect(), cols: n }
    }

    /// Builds a matrix from rows of equal length. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        Self { rows, cols }
    }

    /// Parses rows like `["101", "011"]`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|s| BitVec::from_bit_str(s)).collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, BitVec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows, cols })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows() == self.cols && *self == self.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix { rows, cols: other.cols })
    }

    /// `M · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// `v · M` for a row vector `v`.
    pub fn vec_mul(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.nrows()
            )));
        }
        let mut acc = BitVec::zeros(self.cols);
        for k in v.ones() {
            acc.xor_assign(&self.rows[k]);
        }
        Ok(acc)
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.nrows() != other.nrows() || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum shape mismatch".into()));
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.xor(b)).collect();
        Ok(BitMatrix { rows, cols: self.cols })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column mismatch".into()));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { rows, cols: self.cols })
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.nrows() != self.cols {
            return None;
        }
        let r = rref(self);
        if r.pivots.len() == self.cols {
            Some(r.transform)
        } else {
            None
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Result of a reduced row-echelon reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: BitMatrix,
    /// Pivot column of each nonzero row of `reduced`, increasing.
    pub pivots: Vec<usize>,
    /// Invertible row transform with `transform · M = reduced`.
    pub transform: BitMatrix,
}

/// Reduced row-echelon form with the row transform that produced it.
pub fn rref(m: &BitMatrix) -> Rref {
    let nrows = m.nrows();
    let mut reduced = m.clone();
    let mut transform = BitMatrix::identity(nrows);
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..m.ncols() {
        if pivot_row == nrows {
            break;
        }
        let Some(found) = (pivot_row..nrows).find(|&r| reduced.rows[r].get(col)) else {
            continue;
        };
        reduced.rows.swap(pivot_row, found);
        transform.rows.swap(pivot_row, found);
        let prow = reduced.rows[pivot_row].clone();
        let trow = transform.rows[pivot_row].clone();
        for r in 0..nrows {
            if r != pivot_row && reduced.rows[r].get(col) {
                reduced.rows[r].xor_assign(&prow);
                transform.rows[r].xor_assign(&trow);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    Rref { reduced, pivots, transform }
}

/// Solution set of `A · x = b`.
#[derive(Clone, Debug)]
pub struct Solution {
    /// A particular solution with every free variable set to zero, if the
    /// system is consistent.
    pub particular: Option<BitVec>,
    /// Basis of the kernel of `A`.
    pub kernel: Vec<BitVec>,
}

/// Solves `A · x = b` over GF(2).
pub fn solve(a: &BitMatrix, b: &BitVec) -> Result<Solution> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.nrows()
        )));
    }
    let r = rref(a);
    let tb = r.transform.mul_vec(b)?;
    let rank = r.pivots.len();
    let consistent = (rank..a.nrows()).all(|i| !tb.get(i));
    let particular = consistent.then(|| {
        let mut x = BitVec::zeros(a.ncols());
        for (i, &p) in r.pivots.iter().enumerate() {
            if tb.get(i) {
                x.set(p, true);
            }
        }
        x
    });
    let mut is_pivot = vec![false; a.ncols()];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let kernel = (0..a.ncols())
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVec::unit(a.ncols(), free);
            for (i, &p) in r.pivots.iter().enumerate() {
                if r.reduced.get(i, free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect();
    Ok(Solution { particular, kernel })
}

/// Symplectic inner product `a·d + b·c` of `u = [a, b]` and `v = [c, d]`.
pub fn symplectic_product(u: &BitVec, v: &BitVec) -> Result<bool> {
    if u.len() != v.len() || !u.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "symplectic product needs equal even lengths, got {} and {}",
            u.len(),
            v.len()
        )));
    }
    let n = u.len() / 2;
    let (a, b) = (u.slice(0, n), u.slice(n, n));
    let (c, d) = (v.slice(0, n), v.slice(n, n));
    Ok(a.dot(&d) ^ b.dot(&c))
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let (ar, br, bc) = (a.nrows(), b.nrows(), b.ncols());
    let mut out = BitMatrix::zeros(ar * br, a.ncols() * bc);
    for i in 0..ar {
        for j in a.row(i).ones() {
            for k in 0..br {
                for l in b.row(k).ones() {
                    out.set(i * br + k, j * bc + l, true);
                }
            }
        }
    }
    out
}

/// Column-major vectorization: entry `(i, j)` lands at `j * rows + i`.
pub fn vectorize(m: &BitMatrix) -> BitVec {
    let rows = m.nrows();
    let mut v = BitVec::zeros(rows * m.ncols());
    for (i, row) in m.rows().iter().enumerate() {
        for j in row.ones() {
            v.set(j * rows + i, true);
        }
    }
    v
}

/// Inverse of [`vectorize`] for a `rows × cols` matrix.
pub fn unvectorize(v: &BitVec, rows: usize, cols: usize) -> BitMatrix {
    assert_eq!(v.len(), rows * cols);
    let mut m = BitMatrix::zeros(rows, cols);
    for idx in v.ones() {
        m.set(idx % rows, idx / rows, true);
    }
    m
}

/// The `n² × n²` permutation `W` with `W · vec(Q) = vec(Qᵀ)`.
pub fn vec_permutation(n: usize) -> BitMatrix {
    let mut w = BitMatrix::zeros(n * n, n * n);
    // vec(Q)[j*n + i] = Q[i][j]; vec(Q^T)[j*n + i] = Q[j][i] = vec(Q)[i*n + j]
    for i in 0..n {
        for j in 0..n {
            w.set(j * n + i, i * n + j, true);
        }
    }
    w
}
