//! Dense integer matrices and Smith normal form.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// `left * m * right` is `diag` placed on the main diagonal, zero elsewhere.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero invariant factors, each dividing the next.
    pub diag: Vec<BigUint>,
    pub left: ZMatrix,
    pub right: ZMatrix,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(entries: &[Vec<i64>]) -> Self {
        let cols = entries.first().map_or(0, Vec::len);
        let mut m = Self::zeros(entries.len(), cols);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn mul(&self, other: &ZMatrix) -> Result<ZMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "integer matrix product",
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_diagonal_with(&self, diag: &[BigUint]) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let want = if i == j && i < diag.len() {
                    BigInt::from_biguint(Sign::Plus, diag[i].clone())
                } else {
                    BigInt::zero()
                };
                *self.get(i, j) == want
            })
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += f * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j] += f * s;
            }
        }
    }

    /// `col[dst] += f * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst] += f * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// Determinant is ±1. Checked by exact fraction-free elimination.
    pub fn is_unimodular(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign_det = BigInt::one();
        // Bareiss elimination keeps every intermediate integral.
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
                return false;
            };
            if p != k {
                m.swap_rows(p, k);
                sign_det = -sign_det;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        (sign_det * prev).abs().is_one()
    }

    /// Smith normal form with unimodular transforms.
    pub fn smith_normal_form(&self) -> SmithForm {
        let mut left = ZMatrix::identity(self.rows);
        let mut right = ZMatrix::identity(self.cols);
        let diag = self.clone().reduce(Some((&mut left, &mut right)));
        SmithForm { diag, left, right }
    }

    /// The nonzero invariant factors alone; no transforms are stored, so
    /// wide matrices cost only their own size.
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        self.clone().reduce(None)
    }

    /// Diagonalizes `self` in place, mirroring row operations on `left`
    /// and column operations on `right` when given.
    fn reduce(mut self, mut transforms: Option<(&mut ZMatrix, &mut ZMatrix)>) -> Vec<BigUint> {
        let a = &mut self;
        let mut diag = Vec::new();
        let (r, c) = (a.rows, a.cols);
        let swap = |a: &mut ZMatrix, t: &mut Option<(&mut ZMatrix, &mut ZMatrix)>, i: usize, j: usize, k: usize| {
            a.swap_rows(k, i);
            a.swap_cols(k, j);
            if let Some((left, right)) = t {
                left.swap_rows(k, i);
                right.swap_cols(k, j);
            }
        };

        for t in 0..r.min(c) {
            let Some((pi, pj)) = min_abs_entry(a, t) else { break };
            swap(a, &mut transforms, pi, pj, t);

            loop {
                let mut dirty = false;
                for i in t + 1..r {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = -(a.get(i, t) / a.get(t, t));
                    a.add_row(i, t, &q);
                    if let Some((left, _)) = &mut transforms {
                        left.add_row(i, t, &q);
                    }
                    dirty |= !a.get(i, t).is_zero();
                }
                for j in t + 1..c {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = -(a.get(t, j) / a.get(t, t));
                    a.add_col(j, t, &q);
                    if let Some((_, right)) = &mut transforms {
                        right.add_col(j, t, &q);
                    }
                    dirty |= !a.get(t, j).is_zero();
                }
                if dirty {
                    // A nonzero remainder is smaller than the pivot: move it in.
                    let (pi, pj) = min_abs_in_cross(a, t);
                    swap(a, &mut transforms, pi, pj, t);
                    continue;
                }
                let pivot = a.get(t, t).clone();
                let offender = (t + 1..r).find(|&i| {
                    (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => {
                        a.add_row(t, i, &BigInt::one());
                        if let Some((left, _)) = &mut transforms {
                            left.add_row(t, i, &BigInt::one());
                        }
                    }
                    None => break,
                }
            }
            if a.get(t, t).is_negative() {
                a.negate_row(t);
                if let Some((left, _)) = &mut transforms {
                    left.negate_row(t);
                }
            }
            diag.push(a.get(t, t).magnitude().clone());
        }
        diag
    }
}

fn min_abs_entry(a: &ZMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.magnitude() < a.get(bi, bj).magnitude()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_in_cross(a: &ZMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    for i in t..a.rows {
        let x = a.get(i, t);
        if !x.is_zero() && x.magnitude() < a.get(best.0, best.1).magnitude() {
            best = (i, t);
        }
    }
    for j in t..a.cols {
        let x = a.get(t, j);
        if !x.is_zero() && x.magnitude() < a.get(best.0, best.1).magnitude() {
            best = (t, j);
        }
    }
    best
}
