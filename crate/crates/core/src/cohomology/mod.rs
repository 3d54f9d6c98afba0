//! Mod-2 cohomology of models and integral homology, plain or twisted.

mod homology;

use std::sync::Arc;

use crate::linalg::{F2Matrix, F2Vector, LinalgError, Subspace};
use crate::simplicial::{Cochain, SimplicialError, SimplicialMap, SimplicialModel};

pub use homology::{
    boundary_matrix, cover_twisted_boundary, homology, local_twisted_boundary, reduction_image,
    AbelianGroupInvariants, Coefficients, Twist,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("degree {degree} needs cells through degree {needed}, model stops at {max}")]
    Truncated { degree: usize, needed: usize, max: usize },
}

/// Cached per model and degree: the coboundaries and an echelon basis of
/// cocycle representatives, each vanishing on the pivots of `B^k`.
#[derive(Debug)]
pub struct BasisData {
    coboundaries: Subspace,
    reps: Subspace,
    truncated: bool,
}

/// A basis of `H^k(X; ℤ/2)` by cocycle representatives.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    model: Arc<SimplicialModel>,
    degree: usize,
    data: Arc<BasisData>,
}

/// Basis of `H^k`; needs `k + 1 <= max_degree` so closedness is checkable.
pub fn cohomology_basis(model: &Arc<SimplicialModel>, k: usize) -> Result<CohomologyBasis, CohomologyError> {
    if k + 1 > model.max_degree() {
        return Err(CohomologyError::Truncated { degree: k, needed: k + 1, max: model.max_degree() });
    }
    basis_inner(model, k)
}

/// As [`cohomology_basis`], but at the top degree every cochain counts as
/// closed, so the result may be larger than the true group.
pub fn cohomology_basis_allow_truncated(
    model: &Arc<SimplicialModel>,
    k: usize,
) -> Result<CohomologyBasis, CohomologyError> {
    if k > model.max_degree() {
        return Err(SimplicialError::DegreeOutOfRange { degree: k, max: model.max_degree() }.into());
    }
    basis_inner(model, k)
}

fn basis_inner(model: &Arc<SimplicialModel>, k: usize) -> Result<CohomologyBasis, CohomologyError> {
    let data = model
        .cohomology_slot(k)
        .get_or_init(|| {
            let coboundaries = model.coboundary_space(k).expect("k is in range").clone();
            let truncated = k == model.max_degree();
            let cocycles = if truncated {
                Subspace::full(model.count(k))
            } else {
                model.coboundary(k).expect("k + 1 is in range").kernel()
            };
            let normal = cocycles.basis().iter().map(|z| coboundaries.reduce(z).expect("same ambient"));
            let reps = Subspace::from_spanning(model.count(k), normal).expect("same ambient");
            Arc::new(BasisData { coboundaries, reps, truncated })
        })
        .clone();
    Ok(CohomologyBasis { model: model.clone(), degree: k, data })
}

impl CohomologyBasis {
    pub fn model(&self) -> &Arc<SimplicialModel> {
        &self.model
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.data.reps.dim()
    }

    /// Whether the top-degree shortcut was taken.
    pub fn is_truncated(&self) -> bool {
        self.data.truncated
    }

    pub fn coboundaries(&self) -> &Subspace {
        &self.data.coboundaries
    }

    pub fn representative(&self, i: usize) -> Cochain {
        Cochain::new(self.model.clone(), self.degree, self.data.reps.basis()[i].clone()).expect("shapes agree")
    }

    pub fn representatives(&self) -> Vec<Cochain> {
        (0..self.dim()).map(|i| self.representative(i)).collect()
    }

    /// The cocycle `Σ c_i r_i`.
    pub fn class_of(&self, coords: &F2Vector) -> Cochain {
        Cochain::new(self.model.clone(), self.degree, self.data.reps.combine(coords)).expect("shapes agree")
    }

    fn check(&self, u: &Cochain) -> Result<(), CohomologyError> {
        if !Arc::ptr_eq(u.model(), &self.model) {
            return Err(SimplicialError::ModelMismatch.into());
        }
        if u.degree() != self.degree {
            return Err(SimplicialError::DegreeMismatch { left: self.degree, right: u.degree() }.into());
        }
        Ok(())
    }

    /// Coordinates of the class of a closed cochain.
    pub fn coordinates(&self, u: &Cochain) -> Result<F2Vector, CohomologyError> {
        self.check(u)?;
        if !u.is_closed() {
            return Err(SimplicialError::NotClosed { degree: u.degree() }.into());
        }
        let nf = self.data.coboundaries.reduce(u.values())?;
        self.data
            .reps
            .coordinates(&nf)?
            .ok_or_else(|| SimplicialError::NotClosed { degree: u.degree() }.into())
    }

    pub fn is_zero_class(&self, u: &Cochain) -> Result<bool, CohomologyError> {
        Ok(self.coordinates(u)?.is_zero())
    }
}

/// Canonical representative of `[u]` modulo coboundaries. Needs no cocycle
/// basis, so it stays cheap on large models.
pub fn class_normal_form(u: &Cochain) -> Result<F2Vector, CohomologyError> {
    let b = u.model().coboundary_space(u.degree())?;
    Ok(b.reduce(u.values())?)
}

pub fn is_coboundary(u: &Cochain) -> Result<bool, CohomologyError> {
    Ok(class_normal_form(u)?.is_zero())
}

/// Some `b` with `δb = u`, if one exists.
pub fn coboundary_witness(u: &Cochain) -> Result<Option<Cochain>, CohomologyError> {
    if u.degree() == 0 {
        return Ok(u.is_zero().then(|| Cochain::zero(u.model(), 0)).transpose()?);
    }
    let d = u.model().coboundary(u.degree() - 1)?;
    Ok(match d.solve_affine(u.values())? {
        Some(sol) => Some(Cochain::new(u.model().clone(), u.degree() - 1, sol.particular)?),
        None => None,
    })
}

/// Matrix of a linear operation on cohomology: column `j` holds the
/// coordinates in `codomain` of `op` applied to the `j`-th representative
/// of `domain`.
pub fn operator_matrix(
    domain: &CohomologyBasis,
    codomain: &CohomologyBasis,
    op: impl Fn(&Cochain) -> Result<Cochain, CohomologyError>,
) -> Result<F2Matrix, CohomologyError> {
    let columns = domain
        .representatives()
        .iter()
        .map(|r| codomain.coordinates(&op(r)?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(F2Matrix::from_columns(codomain.dim(), &columns))
}

/// `g^*: H^k(target) -> H^k(source)` in the two bases.
pub fn induced_matrix(
    g: &SimplicialMap,
    target_basis: &CohomologyBasis,
    source_basis: &CohomologyBasis,
) -> Result<F2Matrix, CohomologyError> {
    operator_matrix(target_basis, source_basis, |u| Ok(g.pullback(u)?))
}

/// Mod-2 Betti numbers `dim H^k` for `k < max_degree`.
pub fn betti_numbers(model: &Arc<SimplicialModel>) -> Vec<usize> {
    (0..model.max_degree())
        .map(|k| {
            let z = model.count(k) - model.coboundary(k).expect("in range").rank();
            let b = if k == 0 { 0 } else { model.coboundary(k - 1).expect("in range").rank() };
            z - b
        })
        .collect()
}
