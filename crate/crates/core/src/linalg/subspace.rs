//! Subspaces of GF(2)^n held as a reduced row-echelon basis.

use super::{F2Matrix, F2Vector, LinalgError};

/// A linear subspace of `GF(2)^ambient_dim`.
///
/// The basis is in reduced row-echelon form: pivots strictly increase and
/// every pivot column is zero in all other basis vectors. Two subspaces are
/// equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<F2Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| F2Vector::unit(ambient_dim, i)).collect();
        Subspace { ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    /// The span of arbitrary vectors of length `ambient_dim`.
    pub fn from_spanning<I>(ambient_dim: usize, vectors: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = F2Vector>,
    {
        let rows: Vec<F2Vector> = vectors.into_iter().collect();
        if let Some(bad) = rows.iter().find(|v| v.len() != ambient_dim) {
            return Err(LinalgError::DimensionMismatch {
                op: "subspace span",
                left: ambient_dim,
                right: bad.len(),
            });
        }
        let mut m = F2Matrix::from_rows(ambient_dim, &rows);
        let pivots = m.rref_in_place(ambient_dim);
        let basis = (0..pivots.len()).map(|i| m.row(i)).collect();
        Ok(Subspace { ambient_dim, basis, pivots })
    }

    /// Row space of a matrix.
    pub fn row_space(m: &F2Matrix) -> Self {
        Self::from_spanning(m.cols(), m.row_vectors()).expect("rows share the column count")
    }

    /// Column space of a matrix.
    pub fn column_space(m: &F2Matrix) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn check(&self, op: &'static str, len: usize) -> Result<(), LinalgError> {
        if len == self.ambient_dim {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch { op, left: self.ambient_dim, right: len })
        }
    }

    /// Canonical representative of `v + self`: the unique element of the
    /// coset that vanishes on every pivot column.
    pub fn reduce(&self, v: &F2Vector) -> Result<F2Vector, LinalgError> {
        self.check("subspace reduce", v.len())?;
        let mut out = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(b);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &F2Vector) -> Result<bool, LinalgError> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Whether `v` lies in the coset `translate + self`.
    pub fn contains_coset(&self, translate: &F2Vector, v: &F2Vector) -> Result<bool, LinalgError> {
        self.check("coset membership", translate.len())?;
        self.contains(&v.xor(translate))
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &F2Vector) -> Result<Option<F2Vector>, LinalgError> {
        self.check("subspace coordinates", v.len())?;
        let mut rest = v.clone();
        let mut coords = F2Vector::zeros(self.dim());
        for (k, (b, &p)) in self.basis.iter().zip(&self.pivots).enumerate() {
            if rest.get(p) {
                rest.xor_assign(b);
                coords.set(k, true);
            }
        }
        Ok(rest.is_zero().then_some(coords))
    }

    /// Element with the given coordinates in the echelon basis.
    pub fn combine(&self, coords: &F2Vector) -> F2Vector {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        let mut out = F2Vector::zeros(self.ambient_dim);
        for k in coords.ones() {
            out.xor_assign(&self.basis[k]);
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check("subspace sum", other.ambient_dim)?;
        Subspace::from_spanning(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// Intersection by the Zassenhaus construction: reduce the rows
    /// `[a | a]` and `[b | 0]`; rows whose left half vanishes carry a basis
    /// of the intersection in their right half.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check("subspace intersection", other.ambient_dim)?;
        let n = self.ambient_dim;
        let zero = F2Vector::zeros(n);
        let rows: Vec<F2Vector> = self
            .basis
            .iter()
            .map(|a| a.concat(a))
            .chain(other.basis.iter().map(|b| b.concat(&zero)))
            .collect();
        let mut m = F2Matrix::from_rows(2 * n, &rows);
        let rank = m.rref_in_place(2 * n).len();
        let meet = (0..rank)
            .map(|i| m.row(i))
            .filter(|r| r.slice(0, n).is_zero())
            .map(|r| r.slice(n, 2 * n));
        Subspace::from_spanning(n, meet)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check("subspace containment", other.ambient_dim)?;
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Dimension of the image of `self` in `ambient / by`.
    pub fn quotient_dim(&self, by: &Subspace) -> Result<usize, LinalgError> {
        Ok(self.dim() - self.intersection(by)?.dim())
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image_under(&self, m: &F2Matrix) -> Result<Subspace, LinalgError> {
        self.check("subspace image", m.cols())?;
        let images = self
            .basis
            .iter()
            .map(|b| m.mul_vec(b))
            .collect::<Result<Vec<_>, _>>()?;
        Subspace::from_spanning(m.rows(), images)
    }
}
