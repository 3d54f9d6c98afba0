//! Bit-packed vectors and matrices over GF(2).
//!
//! Rows are stored as runs of `u64` words; elimination is plain word XOR.
//! Pivoting is deterministic: columns are scanned left to right and the
//! lowest available row index with a set bit becomes the pivot row.

use std::fmt;

use super::{LinalgError, Subspace};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector { len, words: vec![0; words_for(len)] }
    }

    /// Unit vector `e_index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.flip(i);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        F2Vector { len, words }
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

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let parity: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        parity & 1 == 1
    }

    /// Indices of the set bits, ascending.
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

    pub fn support(&self) -> Vec<usize> {
        self.ones().collect()
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// The entries `range.start..range.end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> F2Vector {
        let mut out = F2Vector::zeros(end - start);
        for i in self.ones().filter(|&i| i >= start && i < end) {
            out.set(i - start, true);
        }
        out
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Output of [`F2Matrix::rank_and_echelon`].
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rank: usize,
    /// Reduced row-echelon form, `echelon = transform * m`.
    pub echelon: F2Matrix,
    pub transform: F2Matrix,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

/// A solution set `particular + kernel` of a linear system.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: F2Vector,
    pub kernel: Subspace,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        F2Matrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of length `cols`.
    pub fn from_rows(cols: usize, rows: &[F2Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[F2Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_dense(entries: &[Vec<u8>]) -> Self {
        let cols = entries.first().map_or(0, Vec::len);
        let mut m = Self::zeros(entries.len(), cols);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                if x & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
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
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
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

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> F2Vector {
        F2Vector::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn column(&self, j: usize) -> F2Vector {
        let mut v = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn row_vectors(&self) -> Vec<F2Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// `rows[dst] ^= rows[src]`, touching only words from `from_word` on.
    #[inline]
    fn xor_rows(&mut self, dst: usize, src: usize, from_word: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a[from_word..].iter_mut().zip(&b[from_word..]) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        let lo_start = a.min(b) * s;
        lo[lo_start..lo_start + s].swap_with_slice(&mut hi[..s]);
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i).iter().enumerate().flat_map(|(k, &w)| {
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

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matrix product",
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in self.row_ones(i).collect::<Vec<_>>() {
                let src = other.row_words(k).to_vec();
                for (x, y) in out.row_words_mut(i).iter_mut().zip(&src) {
                    *x ^= y;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &F2Vector) -> Result<F2Vector, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch {
                op: "matrix-vector product",
                left: self.cols,
                right: v.len(),
            });
        }
        let mut out = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            let parity: u32 = self
                .row_words(i)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if parity & 1 == 1 {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Vertical concatenation `[self; other]`.
    pub fn stack(&self, other: &F2Matrix) -> Result<F2Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "vertical stack",
                left: self.cols,
                right: other.cols,
            });
        }
        let mut out = F2Matrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn augment(&self, other: &F2Matrix) -> Result<F2Matrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "horizontal augment",
                left: self.rows,
                right: other.rows,
            });
        }
        let mut out = F2Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                out.set(i, j, true);
            }
            for j in other.row_ones(i) {
                out.set(i, self.cols + j, true);
            }
        }
        Ok(out)
    }

    /// Reduces `self` in place to reduced row-echelon form, looking for
    /// pivots only in columns `< col_limit`. Returns the pivot columns.
    pub(crate) fn rref_in_place(&mut self, col_limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..col_limit.min(self.cols) {
            if next == self.rows {
                break;
            }
            let word = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (next..self.rows).find(|&r| self.data[r * self.stride + word] & mask != 0) else {
                continue;
            };
            self.swap_rows(next, p);
            for r in 0..self.rows {
                if r != next && self.data[r * self.stride + word] & mask != 0 {
                    self.xor_rows(r, next, word);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            let mut t = self.transpose();
            t.rref_in_place(t.cols).len()
        } else {
            let mut m = self.clone();
            m.rref_in_place(m.cols).len()
        }
    }

    /// Rank, reduced row-echelon form and an invertible transform with
    /// `echelon = transform * self`.
    pub fn rank_and_echelon(&self) -> Echelon {
        let mut aug = self
            .augment(&F2Matrix::identity(self.rows))
            .expect("identity has matching row count");
        let pivots = aug.rref_in_place(self.cols);
        let mut echelon = F2Matrix::zeros(self.rows, self.cols);
        let mut transform = F2Matrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in aug.row_ones(i) {
                if j < self.cols {
                    echelon.set(i, j, true);
                } else {
                    transform.set(i, j - self.cols, true);
                }
            }
        }
        Echelon { rank: pivots.len(), echelon, transform, pivots }
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref_in_place(m.cols);
        kernel_from_rref(&m, &pivots, self.cols)
    }

    /// Solves `self * x = rhs`. Returns `None` when the system is inconsistent.
    pub fn solve_affine(&self, rhs: &F2Vector) -> Result<Option<AffineSolution>, LinalgError> {
        if rhs.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "solve_affine right-hand side",
                left: self.rows,
                right: rhs.len(),
            });
        }
        let mut aug = F2Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                aug.set(i, j, true);
            }
            if rhs.get(i) {
                aug.set(i, self.cols, true);
            }
        }
        let pivots = aug.rref_in_place(self.cols);
        // Inconsistent iff some row without a pivot carries a 1 on the right.
        if (pivots.len()..self.rows).any(|r| aug.get(r, self.cols)) {
            return Ok(None);
        }
        let mut particular = F2Vector::zeros(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            if aug.get(r, self.cols) {
                particular.set(p, true);
            }
        }
        let kernel = kernel_from_rref(&aug, &pivots, self.cols);
        Ok(Some(AffineSolution { particular, kernel }))
    }
}

/// Null space read off an RREF matrix whose first `n` columns are the system.
fn kernel_from_rref(m: &F2Matrix, pivots: &[usize], n: usize) -> Subspace {
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&f| !is_pivot[f]) {
        let mut v = F2Vector::zeros(n);
        v.set(f, true);
        for (r, &p) in pivots.iter().enumerate() {
            if m.get(r, f) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    Subspace::from_spanning(n, basis).expect("kernel vectors have the ambient length")
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        let e = F2Matrix::identity(3).rank_and_echelon();
        assert_eq!(e.rank, 3);
        assert_eq!(e.echelon, F2Matrix::identity(3));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(F2Matrix::zeros(4, 7).rank_and_echelon().rank, 0);
        assert_eq!(F2Matrix::zeros(4, 7).rank(), 0);
    }

    #[test]
    fn all_ones_two_by_two_has_rank_one() {
        let m = F2Matrix::from_dense(&[vec![1, 1], vec![1, 1]]);
        let e = m.rank_and_echelon();
        assert_eq!(e.rank, 1);
        assert_eq!(e.transform.mul(&m).unwrap(), e.echelon);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let v = F2Vector::from_bits(&[true, false, true]);
        let s = F2Matrix::identity(3).solve_affine(&v).unwrap().unwrap();
        assert_eq!(s.particular, v);
        assert_eq!(s.kernel.dim(), 0);
    }

    #[test]
    fn zero_system_with_nonzero_rhs_is_unsolvable() {
        let v = F2Vector::from_bits(&[false, true]);
        assert!(F2Matrix::zeros(2, 3).solve_affine(&v).unwrap().is_none());
    }

    #[test]
    fn single_equation_two_unknowns() {
        let m = F2Matrix::from_dense(&[vec![1, 1]]);
        let s = m.solve_affine(&F2Vector::from_bits(&[true])).unwrap().unwrap();
        assert_eq!(s.particular, F2Vector::from_bits(&[true, false]));
        assert_eq!(s.kernel.basis(), &[F2Vector::from_bits(&[true, true])]);
    }

    #[test]
    fn rhs_length_is_checked() {
        let err = F2Matrix::identity(2).solve_affine(&F2Vector::zeros(3)).unwrap_err();
        assert!(matches!(err, LinalgError::DimensionMismatch { .. }));
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut m = F2Matrix::zeros(3, 130);
        m.set(0, 129, true);
        m.set(1, 64, true);
        m.set(1, 129, true);
        m.set(2, 0, true);
        m.set(2, 64, true);
        let e = m.rank_and_echelon();
        assert_eq!(e.rank, 3);
        assert_eq!(e.pivots, vec![0, 64, 129]);
        assert_eq!(e.transform.mul(&m).unwrap(), e.echelon);
    }

    #[test]
    fn vector_ones_iterates_across_words() {
        let v = F2Vector::from_support(200, &[3, 64, 199]);
        assert_eq!(v.support(), vec![3, 64, 199]);
        assert_eq!(v.first_one(), Some(3));
        assert_eq!(v.count_ones(), 3);
    }
}
