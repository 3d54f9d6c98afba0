//! Sparse integer matrices for boundary operators.
//!
//! Boundary matrices of simplicial models are very sparse with entries in
//! {-1, 0, 1}. Elimination first consumes every available unit pivot with
//! checked `i64` arithmetic; whatever is left (usually tiny) goes to the
//! dense arbitrary-precision Smith form. Any overflow restarts the whole
//! computation densely.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{F2Vector, ZMatrix};

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, Default)]
pub struct SparseZMatrix {
    rows: usize,
    columns: Vec<BTreeMap<usize, i64>>,
}

/// An integer vector stored by its nonzero entries.
pub type SparseZVector = BTreeMap<usize, BigInt>;

struct Overflow;

impl SparseZMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseZMatrix { rows, columns: vec![BTreeMap::new(); cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// `m[i][j] += value`.
    pub fn add(&mut self, i: usize, j: usize, value: i64) {
        assert!(i < self.rows, "row index out of range");
        let e = self.columns[j].entry(i).or_insert(0);
        *e += value;
        if *e == 0 {
            self.columns[j].remove(&i);
        }
    }

    pub fn column(&self, j: usize) -> &BTreeMap<usize, i64> {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> ZMatrix {
        let mut m = ZMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, &v) in col {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// Mod-2 reduction as a dense GF(2) matrix.
    pub fn mod2(&self) -> super::F2Matrix {
        let mut m = super::F2Matrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, &v) in col {
                if v & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Nonzero invariant factors (including the 1s), as a divisibility chain.
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        match self.invariant_factors_fast() {
            Ok(d) => d,
            Err(Overflow) => self.to_dense().invariant_factors(),
        }
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    fn invariant_factors_fast(&self) -> Result<Vec<BigUint>, Overflow> {
        // Row-major working copy plus column occupancy.
        let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); self.rows];
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cols()];
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, &v) in col {
                rows[i].insert(j, v);
                col_rows[j].insert(i);
            }
        }
        let mut units = 0usize;
        let mut progress = true;
        while progress {
            progress = false;
            for c in 0..col_rows.len() {
                let Some(r) = col_rows[c]
                    .iter()
                    .copied()
                    .filter(|&i| rows[i][&c].abs() == 1)
                    .min_by_key(|&i| (rows[i].len(), i))
                else {
                    continue;
                };
                let pivot_row = std::mem::take(&mut rows[r]);
                let p = pivot_row[&c];
                for &j in pivot_row.keys() {
                    col_rows[j].remove(&r);
                }
                let others: Vec<usize> = col_rows[c].iter().copied().collect();
                for i in others {
                    let f = rows[i][&c].checked_mul(p).ok_or(Overflow)?;
                    for (&j, &v) in &pivot_row {
                        let e = rows[i].entry(j).or_insert(0);
                        let was_zero = *e == 0;
                        *e = e.checked_sub(f.checked_mul(v).ok_or(Overflow)?).ok_or(Overflow)?;
                        if *e == 0 {
                            rows[i].remove(&j);
                            col_rows[j].remove(&i);
                        } else if was_zero {
                            col_rows[j].insert(i);
                        }
                    }
                }
                debug_assert!(col_rows[c].is_empty());
                units += 1;
                progress = true;
            }
        }
        // Dense remainder on the surviving rows and columns.
        let live_rows: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
        let live_cols: Vec<usize> = (0..col_rows.len()).filter(|&j| !col_rows[j].is_empty()).collect();
        let col_pos: BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut rest = ZMatrix::zeros(live_rows.len(), live_cols.len());
        for (k, &i) in live_rows.iter().enumerate() {
            for (&j, &v) in &rows[i] {
                rest.set(k, col_pos[&j], BigInt::from(v));
            }
        }
        let mut diag = vec![BigUint::one(); units];
        diag.extend(rest.invariant_factors());
        Ok(diag)
    }

    /// A ℤ-basis of `{x : m x = 0}`.
    pub fn kernel_basis(&self) -> Vec<SparseZVector> {
        match self.kernel_fast() {
            Ok(k) => k,
            Err(Overflow) => self.kernel_dense(),
        }
    }

    fn kernel_dense(&self) -> Vec<SparseZVector> {
        let s = self.to_dense().smith_normal_form();
        (s.diag.len()..self.cols())
            .map(|k| {
                (0..self.cols())
                    .filter(|&i| !s.right.get(i, k).is_zero())
                    .map(|i| (i, s.right.get(i, k).clone()))
                    .collect()
            })
            .collect()
    }

    /// Unimodular column elimination with history. Pivoted columns drop out;
    /// the kernel lives entirely on the unpivoted ones.
    fn kernel_fast(&self) -> Result<Vec<SparseZVector>, Overflow> {
        let n = self.cols();
        let mut cols = self.columns.clone();
        let mut hist: Vec<BTreeMap<usize, i64>> = (0..n).map(|j| BTreeMap::from([(j, 1)])).collect();
        let mut row_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.rows];
        for (j, col) in cols.iter().enumerate() {
            for &i in col.keys() {
                row_cols[i].insert(j);
            }
        }
        let mut active = vec![true; n];
        let mut progress = true;
        while progress {
            progress = false;
            for c in 0..n {
                if !active[c] {
                    continue;
                }
                let Some(r) = cols[c]
                    .iter()
                    .filter(|(_, &v)| v.abs() == 1)
                    .map(|(&i, _)| i)
                    .min_by_key(|&i| (row_cols[i].len(), i))
                else {
                    continue;
                };
                let p = cols[c][&r];
                active[c] = false;
                let pivot_col = std::mem::take(&mut cols[c]);
                let pivot_hist = hist[c].clone();
                for &i in pivot_col.keys() {
                    row_cols[i].remove(&c);
                }
                let others: Vec<usize> = row_cols[r].iter().copied().collect();
                for j in others {
                    let f = cols[j][&r].checked_mul(p).ok_or(Overflow)?;
                    for (&i, &v) in &pivot_col {
                        let e = cols[j].entry(i).or_insert(0);
                        let was_zero = *e == 0;
                        *e = e.checked_sub(f.checked_mul(v).ok_or(Overflow)?).ok_or(Overflow)?;
                        if *e == 0 {
                            cols[j].remove(&i);
                            row_cols[i].remove(&j);
                        } else if was_zero {
                            row_cols[i].insert(j);
                        }
                    }
                    axpy(&mut hist[j], -f, &pivot_hist)?;
                }
                progress = true;
            }
        }
        let mut basis: Vec<SparseZVector> = Vec::new();
        let mut stuck = Vec::new();
        for j in (0..n).filter(|&j| active[j]) {
            if cols[j].is_empty() {
                basis.push(hist[j].iter().map(|(&i, &v)| (i, BigInt::from(v))).collect());
            } else {
                stuck.push(j);
            }
        }
        if !stuck.is_empty() {
            let live_rows: BTreeSet<usize> = stuck.iter().flat_map(|&j| cols[j].keys().copied()).collect();
            let row_pos: BTreeMap<usize, usize> = live_rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let mut rest = ZMatrix::zeros(live_rows.len(), stuck.len());
            for (k, &j) in stuck.iter().enumerate() {
                for (&i, &v) in &cols[j] {
                    rest.set(row_pos[&i], k, BigInt::from(v));
                }
            }
            let s = rest.smith_normal_form();
            for k in s.diag.len()..stuck.len() {
                let mut v = SparseZVector::new();
                for (l, &j) in stuck.iter().enumerate() {
                    let coef = s.right.get(l, k);
                    if coef.is_zero() {
                        continue;
                    }
                    for (&i, &h) in &hist[j] {
                        *v.entry(i).or_insert_with(BigInt::zero) += coef * h;
                    }
                }
                v.retain(|_, x| !x.is_zero());
                basis.push(v);
            }
        }
        Ok(basis)
    }
}

fn axpy(dst: &mut BTreeMap<usize, i64>, f: i64, src: &BTreeMap<usize, i64>) -> Result<(), Overflow> {
    for (&i, &v) in src {
        let e = dst.entry(i).or_insert(0);
        *e = e.checked_add(f.checked_mul(v).ok_or(Overflow)?).ok_or(Overflow)?;
        if *e == 0 {
            dst.remove(&i);
        }
    }
    Ok(())
}

/// Mod-2 reduction of a sparse integer vector.
pub fn reduce_mod2(len: usize, v: &SparseZVector) -> F2Vector {
    let mut out = F2Vector::zeros(len);
    let two = BigInt::from(2);
    for (&i, x) in v {
        if !(x % &two).is_zero() {
            out.set(i, true);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(entries: &[Vec<i64>]) -> SparseZMatrix {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut m = SparseZMatrix::new(rows, cols);
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.add(i, j, v);
                }
            }
        }
        m
    }

    #[test]
    fn boundary_of_projective_plane_cells() {
        // ∂e2 = 2 e1: one invariant factor 2.
        let m = from_dense(&[vec![2]]);
        assert_eq!(m.invariant_factors(), vec![BigUint::from(2u32)]);
    }

    #[test]
    fn mixed_units_and_torsion() {
        let m = from_dense(&[vec![1, 1, 0], vec![1, -1, 0], vec![0, 0, 0]]);
        let d: Vec<u32> = m.invariant_factors().iter().map(|x| u32::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![1, 2]);
    }

    #[test]
    fn kernel_of_triangle_boundary() {
        // Edges 01, 02, 12 of a hollow triangle; kernel is the loop.
        let m = from_dense(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let as_i = |i| v.get(&i).cloned().unwrap_or_default();
        for r in 0..3 {
            let dot: BigInt = (0..3).map(|j| BigInt::from(m.column(j).get(&r).copied().unwrap_or(0)) * as_i(j)).sum();
            assert!(dot.is_zero());
        }
        assert!((0..3).all(|j| as_i(j).magnitude() == &BigUint::one()));
    }

    #[test]
    fn kernel_needs_dense_remainder() {
        // [2 4] has kernel spanned by (2,-1); no unit pivot exists.
        let m = from_dense(&[vec![2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let x = k[0].get(&0).cloned().unwrap_or_default();
        let y = k[0].get(&1).cloned().unwrap_or_default();
        assert_eq!(BigInt::from(2) * &x + BigInt::from(4) * &y, BigInt::zero());
        assert!(y == BigInt::from(1) || y == BigInt::from(-1));
    }
}
