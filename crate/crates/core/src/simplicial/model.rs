//! Finite truncations of simplicial sets.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::linalg::{F2Matrix, Subspace};

use super::operator::{delete_bit, Degeneracy, Mono, Target};
use super::SimplicialError;

/// Highest degree any model may carry.
pub const DEGREE_CAP: usize = 6;

/// A simplicial set truncated at `max_degree`, given by its nondegenerate
/// cells and their faces.
///
/// Every simplex of dimension `<= max_degree` is present: the listing is
/// complete through that degree. A model with no cells above some degree `d`
/// is therefore known to have only degenerate simplices there.
pub struct SimplicialModel {
    max_degree: usize,
    counts: Vec<usize>,
    /// `faces[n][cell * (n + 1) + i]` is `d_i` of `cell`; empty for `n = 0`.
    faces: Vec<Vec<Target>>,
    cache: Cache,
}

#[derive(Default)]
struct Cache {
    face_tables: Vec<OnceLock<Vec<Target>>>,
    coboundaries: Vec<OnceLock<F2Matrix>>,
    coboundary_spaces: Vec<OnceLock<Subspace>>,
    pub(crate) cohomology: Vec<OnceLock<Arc<crate::cohomology::BasisData>>>,
}

impl Cache {
    fn new(max_degree: usize) -> Self {
        let slots = max_degree + 1;
        Cache {
            face_tables: (0..slots).map(|_| OnceLock::new()).collect(),
            coboundaries: (0..slots).map(|_| OnceLock::new()).collect(),
            coboundary_spaces: (0..slots).map(|_| OnceLock::new()).collect(),
            cohomology: (0..slots).map(|_| OnceLock::new()).collect(),
        }
    }
}

/// A failed simplicial identity or malformed face entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `d_i d_j σ ≠ d_{j-1} d_i σ` for the listed pairs `(i, j)`, `i < j`.
    FaceIdentity { degree: usize, cell: usize, pairs: Vec<(usize, usize)> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FaceIdentity { degree, cell, pairs } => {
                let list: Vec<String> = pairs.iter().map(|(i, j)| format!("d{i}d{j}")).collect();
                write!(f, "cell {cell} in degree {degree}: identities fail for {}", list.join(", "))
            }
        }
    }
}

impl SimplicialModel {
    /// Builds a model from cell counts and face lists, checking that every
    /// face target names an existing cell of the right dimension.
    pub fn new(
        max_degree: usize,
        counts: Vec<usize>,
        faces: Vec<Vec<Target>>,
    ) -> Result<Self, SimplicialError> {
        if max_degree == 0 || max_degree > DEGREE_CAP {
            return Err(SimplicialError::BadStructure(format!(
                "max_degree must lie in 1..={DEGREE_CAP}, got {max_degree}"
            )));
        }
        if counts.len() != max_degree + 1 || faces.len() != max_degree + 1 {
            return Err(SimplicialError::BadStructure(format!(
                "expected {} degrees of cells and faces, got {} and {}",
                max_degree + 1,
                counts.len(),
                faces.len()
            )));
        }
        if !faces[0].is_empty() {
            return Err(SimplicialError::BadStructure("vertices have no faces".into()));
        }
        for n in 1..=max_degree {
            if faces[n].len() != counts[n] * (n + 1) {
                return Err(SimplicialError::BadStructure(format!(
                    "degree {n}: expected {} face entries, got {}",
                    counts[n] * (n + 1),
                    faces[n].len()
                )));
            }
            for (k, t) in faces[n].iter().enumerate() {
                let (cell, i) = (k / (n + 1), k % (n + 1));
                let fdim = n - 1;
                let bad = |why: String| {
                    SimplicialError::BadStructure(format!("degree {n}, cell {cell}, face {i}: {why}"))
                };
                if t.degen.len() > fdim || t.degen.top().is_some_and(|j| j >= fdim) {
                    return Err(bad(format!("degeneracy {:?} does not apply to a {fdim}-simplex", t.degen)));
                }
                let tdim = fdim - t.degen.len();
                if t.cell >= counts[tdim] {
                    return Err(bad(format!("cell {} does not exist in degree {tdim}", t.cell)));
                }
            }
        }
        Ok(SimplicialModel { max_degree, counts, faces, cache: Cache::new(max_degree) })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `d_i` of a nondegenerate cell.
    #[inline]
    pub fn face(&self, n: usize, cell: usize, i: usize) -> Target {
        self.faces[n][cell * (n + 1) + i]
    }

    pub fn faces_of(&self, n: usize, cell: usize) -> &[Target] {
        &self.faces[n][cell * (n + 1)..(cell + 1) * (n + 1)]
    }

    #[cfg(test)]
    pub(crate) fn raw_faces(&self) -> &[Vec<Target>] {
        &self.faces
    }

    pub(crate) fn cohomology_slot(&self, k: usize) -> &OnceLock<Arc<crate::cohomology::BasisData>> {
        &self.cache.cohomology[k]
    }

    /// The face of a nondegenerate `k`-cell spanned by the vertices in
    /// `mask`, normalized as `s_J z`.
    #[inline]
    pub fn face_by_mask(&self, k: usize, cell: usize, mask: u32) -> Target {
        debug_assert!(mask != 0 && mask < 1 << (k + 1));
        if k == 0 {
            return Target::cell(cell);
        }
        self.face_table(k)[(cell << (k + 1)) | mask as usize]
    }

    fn face_table(&self, k: usize) -> &[Target] {
        self.cache.face_tables[k].get_or_init(|| self.build_face_table(k))
    }

    fn build_face_table(&self, k: usize) -> Vec<Target> {
        let full = (1u32 << (k + 1)) - 1;
        let mut table = vec![Target::cell(0); self.count(k) << (k + 1)];
        for cell in 0..self.count(k) {
            for mask in 1..=full {
                let t = if mask == full {
                    Target::cell(cell)
                } else {
                    // Drop the highest missing vertex first.
                    let i = (31 - (!mask & full).leading_zeros()) as usize;
                    let rest = delete_bit(mask, i);
                    self.apply(self.face(k, cell, i), k - 1, Mono::injection(rest))
                };
                table[(cell << (k + 1)) | mask as usize] = t;
            }
        }
        table
    }

    /// `θ^*` applied to the `n`-simplex `t`, for monotone `θ : [m] -> [n]`.
    pub fn apply(&self, t: Target, n: usize, theta: Mono) -> Target {
        let k = n - t.degen.len();
        let phi = theta.map(|v| t.degen.apply(v));
        let (rho, image) = phi.factor();
        let inner = self.face_by_mask(k, t.cell, image);
        Target::new(rho.then(inner.degen, theta.len() - 1), inner.cell)
    }

    /// `d_i` of an arbitrary (possibly degenerate) `n`-simplex.
    pub fn face_of_target(&self, t: Target, n: usize, i: usize) -> Target {
        self.apply(t, n, Mono::coface(n, i))
    }

    /// All violated simplicial identities; empty iff the model is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for n in 2..=self.max_degree {
            for cell in 0..self.count(n) {
                let mut pairs = Vec::new();
                for j in 1..=n {
                    let dj = self.face(n, cell, j);
                    for i in 0..j {
                        let di = self.face(n, cell, i);
                        let lhs = self.face_of_target(dj, n - 1, i);
                        let rhs = self.face_of_target(di, n - 1, j - 1);
                        if lhs != rhs {
                            pairs.push((i, j));
                        }
                    }
                }
                if !pairs.is_empty() {
                    pairs.sort_unstable();
                    out.push(Violation::FaceIdentity { degree: n, cell, pairs });
                }
            }
        }
        out
    }

    /// Normalized coboundary `δ : C^k -> C^{k+1}`; rows are `(k+1)`-cells.
    pub fn coboundary(&self, k: usize) -> Result<&F2Matrix, SimplicialError> {
        if k + 1 > self.max_degree {
            return Err(SimplicialError::DegreeOutOfRange { degree: k + 1, max: self.max_degree });
        }
        Ok(self.cache.coboundaries[k].get_or_init(|| {
            let mut m = F2Matrix::zeros(self.count(k + 1), self.count(k));
            for tau in 0..self.count(k + 1) {
                for t in self.faces_of(k + 1, tau) {
                    if let Some(sigma) = t.nondegenerate() {
                        m.flip(tau, sigma);
                    }
                }
            }
            m
        }))
    }

    /// `B^k`, the image of `δ^{k-1}` in `C^k`.
    pub fn coboundary_space(&self, k: usize) -> Result<&Subspace, SimplicialError> {
        if k > self.max_degree {
            return Err(SimplicialError::DegreeOutOfRange { degree: k, max: self.max_degree });
        }
        Ok(self.cache.coboundary_spaces[k].get_or_init(|| {
            if k == 0 {
                Subspace::zero(self.count(0))
            } else {
                let d = self.coboundary(k - 1).expect("k - 1 < max_degree");
                Subspace::column_space(d)
            }
        }))
    }

    /// The same simplicial set truncated lower.
    pub fn truncate(&self, max_degree: usize) -> Result<SimplicialModel, SimplicialError> {
        if max_degree > self.max_degree {
            return Err(SimplicialError::DegreeOutOfRange { degree: max_degree, max: self.max_degree });
        }
        SimplicialModel::new(
            max_degree,
            self.counts[..=max_degree].to_vec(),
            self.faces[..=max_degree].to_vec(),
        )
    }

    /// Renames cells: cell `c` of degree `n` becomes `perms[n][c]`.
    pub fn relabel(&self, perms: &[Vec<usize>]) -> Result<SimplicialModel, SimplicialError> {
        check_permutations(&self.counts, perms)?;
        let mut faces = vec![Vec::new(); self.max_degree + 1];
        for n in 1..=self.max_degree {
            let mut f = vec![Target::cell(0); self.faces[n].len()];
            for cell in 0..self.count(n) {
                for (i, t) in self.faces_of(n, cell).iter().enumerate() {
                    let tdim = n - 1 - t.degen.len();
                    f[perms[n][cell] * (n + 1) + i] = Target::new(t.degen, perms[tdim][t.cell]);
                }
            }
            faces[n] = f;
        }
        SimplicialModel::new(self.max_degree, self.counts.clone(), faces)
    }

    /// Euler characteristic of the listed cells.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Structural equality of cells and faces.
    pub fn same_cells(&self, other: &SimplicialModel) -> bool {
        self.max_degree == other.max_degree && self.counts == other.counts && self.faces == other.faces
    }
}

pub(crate) fn check_permutations(counts: &[usize], perms: &[Vec<usize>]) -> Result<(), SimplicialError> {
    if perms.len() != counts.len() {
        return Err(SimplicialError::BadStructure("one permutation per degree is required".into()));
    }
    for (n, p) in perms.iter().enumerate() {
        let mut seen = vec![false; counts[n]];
        if p.len() != counts[n] || p.iter().any(|&x| x >= counts[n] || std::mem::replace(&mut seen[x], true)) {
            return Err(SimplicialError::BadStructure(format!("degree {n}: not a permutation")));
        }
    }
    Ok(())
}

impl fmt::Debug for SimplicialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialModel")
            .field("max_degree", &self.max_degree)
            .field("counts", &self.counts)
            .finish_non_exhaustive()
    }
}

/// Applies a degeneracy to a target: `s_J (s_K x) = s_{K∘J} x`.
pub fn degenerate_target(t: Target, j: Degeneracy, n: usize) -> Target {
    Target::new(j.then(t.degen, n), t.cell)
}
