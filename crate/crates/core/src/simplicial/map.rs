//! Simplicial maps and free involutions between finite models.

use std::sync::Arc;

use crate::linalg::F2Vector;

use super::model::{check_permutations, degenerate_target};
use super::operator::Target;
use super::{Cochain, SimplicialError, SimplicialModel};

/// A simplicial map, given on nondegenerate cells of every source degree.
#[derive(Clone)]
pub struct SimplicialMap {
    source: Arc<SimplicialModel>,
    target: Arc<SimplicialModel>,
    assignment: Vec<Vec<Target>>,
}

impl SimplicialMap {
    /// Checks shapes and that the map commutes with every face operator.
    pub fn new(
        source: Arc<SimplicialModel>,
        target: Arc<SimplicialModel>,
        assignment: Vec<Vec<Target>>,
    ) -> Result<Self, SimplicialError> {
        let map = Self::new_unchecked(source, target, assignment)?;
        let bad = map.violations();
        if let Some(&(n, cell, i)) = bad.first() {
            return Err(SimplicialError::NotSimplicial(format!(
                "map does not commute with d{i} on cell {cell} of degree {n} ({} failures)",
                bad.len()
            )));
        }
        Ok(map)
    }

    /// Checks shapes only.
    pub(crate) fn new_unchecked(
        source: Arc<SimplicialModel>,
        target: Arc<SimplicialModel>,
        assignment: Vec<Vec<Target>>,
    ) -> Result<Self, SimplicialError> {
        if source.max_degree() > target.max_degree() {
            return Err(SimplicialError::BadStructure(format!(
                "map source reaches degree {} but target only {}",
                source.max_degree(),
                target.max_degree()
            )));
        }
        if assignment.len() != source.max_degree() + 1 {
            return Err(SimplicialError::BadStructure("map needs an assignment per source degree".into()));
        }
        for (n, row) in assignment.iter().enumerate() {
            if row.len() != source.count(n) {
                return Err(SimplicialError::BadStructure(format!(
                    "map degree {n}: {} images for {} cells",
                    row.len(),
                    source.count(n)
                )));
            }
            for t in row {
                let ok = t.degen.len() <= n
                    && t.degen.top().is_none_or(|j| j < n)
                    && t.cell < target.count(n - t.degen.len());
                if !ok {
                    return Err(SimplicialError::BadStructure(format!(
                        "map degree {n}: image {t:?} is not an {n}-simplex of the target"
                    )));
                }
            }
        }
        Ok(SimplicialMap { source, target, assignment })
    }

    pub fn identity(model: &Arc<SimplicialModel>) -> Self {
        let assignment = (0..=model.max_degree())
            .map(|n| (0..model.count(n)).map(Target::cell).collect())
            .collect();
        SimplicialMap { source: model.clone(), target: model.clone(), assignment }
    }

    pub fn source(&self) -> &Arc<SimplicialModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialModel> {
        &self.target
    }

    pub fn assignment(&self) -> &[Vec<Target>] {
        &self.assignment
    }

    /// Image of a nondegenerate `n`-cell.
    pub fn image(&self, n: usize, cell: usize) -> Target {
        self.assignment[n][cell]
    }

    /// Image of an arbitrary `n`-simplex `s_J x`.
    pub fn image_of_target(&self, t: Target, n: usize) -> Target {
        let k = n - t.degen.len();
        degenerate_target(self.image(k, t.cell), t.degen, n)
    }

    /// Triples `(degree, cell, i)` where `d_i f(σ) ≠ f(d_i σ)`.
    pub fn violations(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for n in 1..=self.source.max_degree() {
            for cell in 0..self.source.count(n) {
                let img = self.image(n, cell);
                for i in 0..=n {
                    let lhs = self.target.face_of_target(img, n, i);
                    let rhs = self.image_of_target(self.source.face(n, cell, i), n - 1);
                    if lhs != rhs {
                        out.push((n, cell, i));
                    }
                }
            }
        }
        out
    }

    /// `(f^# u)(σ) = u(f σ)`, zero where `f σ` is degenerate.
    pub fn pullback(&self, u: &Cochain) -> Result<Cochain, SimplicialError> {
        if !Arc::ptr_eq(u.model(), &self.target) {
            return Err(SimplicialError::ModelMismatch);
        }
        let n = u.degree();
        if n > self.source.max_degree() {
            return Err(SimplicialError::DegreeOutOfRange { degree: n, max: self.source.max_degree() });
        }
        let mut values = F2Vector::zeros(self.source.count(n));
        for (cell, t) in self.assignment[n].iter().enumerate() {
            if t.nondegenerate().is_some_and(|c| u.at(c)) {
                values.set(cell, true);
            }
        }
        Cochain::new(self.source.clone(), n, values)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap, SimplicialError> {
        if !Arc::ptr_eq(&self.target, &other.source) {
            return Err(SimplicialError::ModelMismatch);
        }
        if self.source.max_degree() > other.source.max_degree() {
            return Err(SimplicialError::BadStructure("composite exceeds the middle model's degrees".into()));
        }
        let assignment = self
            .assignment
            .iter()
            .enumerate()
            .map(|(n, row)| row.iter().map(|&t| other.image_of_target(t, n)).collect())
            .collect();
        Ok(SimplicialMap { source: self.source.clone(), target: other.target.clone(), assignment })
    }

    /// Transports the map along cell relabelings of source and target.
    pub fn relabel(
        &self,
        source: Arc<SimplicialModel>,
        source_perms: &[Vec<usize>],
        target: Arc<SimplicialModel>,
        target_perms: &[Vec<usize>],
    ) -> Result<SimplicialMap, SimplicialError> {
        check_permutations(self.source.counts(), source_perms)?;
        check_permutations(self.target.counts(), target_perms)?;
        let mut assignment: Vec<Vec<Target>> =
            (0..=self.source.max_degree()).map(|n| vec![Target::cell(0); self.source.count(n)]).collect();
        for (n, row) in self.assignment.iter().enumerate() {
            for (cell, t) in row.iter().enumerate() {
                let k = n - t.degen.len();
                assignment[n][source_perms[n][cell]] = Target::new(t.degen, target_perms[k][t.cell]);
            }
        }
        SimplicialMap::new_unchecked(source, target, assignment)
    }

    /// Whether the two maps agree on every cell.
    pub fn same_assignment(&self, other: &SimplicialMap) -> bool {
        self.assignment == other.assignment
    }
}

impl std::fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialMap")
            .field("source", &self.source.counts())
            .field("target", &self.target.counts())
            .finish_non_exhaustive()
    }
}

/// A fixed-point-free simplicial involution, as a permutation of the
/// nondegenerate cells of each degree.
#[derive(Clone, Debug)]
pub struct FreeInvolution {
    model: Arc<SimplicialModel>,
    perms: Vec<Vec<usize>>,
}

impl FreeInvolution {
    pub fn new(model: Arc<SimplicialModel>, perms: Vec<Vec<usize>>) -> Result<Self, SimplicialError> {
        check_permutations(model.counts(), &perms)?;
        for (n, p) in perms.iter().enumerate() {
            for (c, &t) in p.iter().enumerate() {
                if t == c {
                    return Err(SimplicialError::FixedCell { degree: n, cell: c });
                }
                if p[t] != c {
                    return Err(SimplicialError::NotSimplicial(format!(
                        "involution does not square to the identity on cell {c} of degree {n}"
                    )));
                }
            }
        }
        let inv = FreeInvolution { model, perms };
        for n in 1..=inv.model.max_degree() {
            for c in 0..inv.model.count(n) {
                for i in 0..=n {
                    let lhs = inv.model.face(n, inv.perms[n][c], i);
                    let rhs = inv.act(inv.model.face(n, c, i), n - 1);
                    if lhs != rhs {
                        return Err(SimplicialError::NotSimplicial(format!(
                            "involution does not commute with d{i} on cell {c} of degree {n}"
                        )));
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn model(&self) -> &Arc<SimplicialModel> {
        &self.model
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    #[inline]
    pub fn image(&self, n: usize, cell: usize) -> usize {
        self.perms[n][cell]
    }

    /// `T` applied to an `n`-simplex `s_J x`.
    pub fn act(&self, t: Target, n: usize) -> Target {
        Target::new(t.degen, self.perms[n - t.degen.len()][t.cell])
    }

    pub fn as_map(&self) -> SimplicialMap {
        let assignment = self.perms.iter().map(|p| p.iter().map(|&c| Target::cell(c)).collect()).collect();
        SimplicialMap { source: self.model.clone(), target: self.model.clone(), assignment }
    }

    /// `T^# u`.
    pub fn pullback(&self, u: &Cochain) -> Result<Cochain, SimplicialError> {
        if !Arc::ptr_eq(u.model(), &self.model) {
            return Err(SimplicialError::ModelMismatch);
        }
        let n = u.degree();
        let mut values = F2Vector::zeros(self.model.count(n));
        for c in u.values().ones() {
            values.set(self.perms[n][c], true);
        }
        Cochain::new(self.model.clone(), n, values)
    }

    /// Transports the involution along a cell relabeling.
    pub fn relabel(&self, model: Arc<SimplicialModel>, perms: &[Vec<usize>]) -> Result<FreeInvolution, SimplicialError> {
        let mut out: Vec<Vec<usize>> = self.perms.iter().map(|p| vec![0; p.len()]).collect();
        for (n, p) in self.perms.iter().enumerate() {
            for (c, &t) in p.iter().enumerate() {
                out[n][perms[n][c]] = perms[n][t];
            }
        }
        FreeInvolution::new(model, out)
    }
}
