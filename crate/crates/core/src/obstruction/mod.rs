//! Deciding whether a normal 1-type `(π, w₁, w₂)` admits stably exotic
//! 4-manifolds: the primary obstruction `w₁³ + w₁w₂`, the Kreck condition
//! `w₂ = w₁²`, the twisted square `Sq²_w = Sq² + w₁Sq¹ + w₂`, and the
//! secondary obstruction computed on the `w₁`-double cover.

mod cover;
mod secondary;
mod verdict;

use std::sync::Arc;

use serde::Serialize;

use crate::cohomology::{
    cohomology_basis, cohomology_basis_allow_truncated, homology, operator_matrix, AbelianGroupInvariants,
    Coefficients, CohomologyBasis, CohomologyError, Twist,
};
use crate::linalg::{F2Matrix, F2Vector, LinalgError, Subspace};
use crate::simplicial::{Cochain, SimplicialError, SimplicialModel};

pub use cover::DoubleCoverData;
pub use secondary::{
    lift_data_solutions, restricted_image, secondary_test, secondary_witness, LiftDatum, LiftSolutions,
    SecondaryOutcome, SectionDatum,
};
pub use verdict::{decide, replay, DecideConfig, Evidence, LiftEvidence, Outcome, SectionEvidence, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObstructionError {
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid double cover: {0}")]
    InvalidCover(String),
    #[error("invalid lift datum: {0}")]
    InvalidLift(String),
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("invalid normal 1-type: {0}")]
    InvalidInput(String),
}

/// Hypotheses the caller vouches for, each with its provenance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Assertions {
    pub cd_at_most_3: Option<String>,
    pub h5_zero: Option<String>,
}

/// A model of `Bπ` with cocycles representing `w₁` and `w₂`.
#[derive(Clone, Debug)]
pub struct NormalOneType {
    pub base: Arc<SimplicialModel>,
    pub w1: Cochain,
    pub w2: Cochain,
    pub assertions: Assertions,
}

impl NormalOneType {
    pub fn new(base: Arc<SimplicialModel>, w1: Cochain, w2: Cochain) -> Self {
        NormalOneType { base, w1, w2, assertions: Assertions::default() }
    }

    pub fn with_assertions(mut self, assertions: Assertions) -> Self {
        self.assertions = assertions;
        self
    }
}

/// Every violated requirement on a normal 1-type; empty when valid.
pub fn validate_normal_type(nt: &NormalOneType) -> Vec<String> {
    let mut reasons = Vec::new();
    if nt.base.max_degree() < 4 {
        reasons.push(format!("model stops at degree {}, at least 4 is needed", nt.base.max_degree()));
    }
    for (name, w, degree) in [("w1", &nt.w1, 1), ("w2", &nt.w2, 2)] {
        if !Arc::ptr_eq(w.model(), &nt.base) {
            reasons.push(format!("{name} lives on a different model"));
            continue;
        }
        if w.degree() != degree {
            reasons.push(format!("{name} has degree {}, expected {degree}", w.degree()));
            continue;
        }
        if !w.is_closed() {
            reasons.push(format!("{name} is not closed"));
        }
    }
    if reasons.is_empty() && nt.base.coboundary_space(1).is_ok_and(|b| b.contains(nt.w1.values()).unwrap_or(false))
    {
        reasons.push("w1 is zero in cohomology; the orientable case is excluded".to_string());
    }
    reasons
}

/// A cohomology class with its chosen representative.
#[derive(Clone, Debug)]
pub struct ClassValue {
    pub representative: Cochain,
    pub coordinates: F2Vector,
}

impl ClassValue {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_zero()
    }
}

pub(crate) fn primary_cocycle(nt: &NormalOneType) -> Result<Cochain, ObstructionError> {
    let w1 = &nt.w1;
    let cube = w1.cup(w1)?.cup(w1)?;
    Ok(cube.add(&w1.cup(&nt.w2)?)?)
}

/// `w₁³ + w₁w₂` in the basis of `H³`.
pub fn primary_obstruction(nt: &NormalOneType) -> Result<ClassValue, ObstructionError> {
    let representative = primary_cocycle(nt)?;
    let basis = cohomology_basis(&nt.base, 3)?;
    let coordinates = basis.coordinates(&representative)?;
    Ok(ClassValue { representative, coordinates })
}

pub(crate) fn kreck_cocycle(nt: &NormalOneType) -> Result<Cochain, ObstructionError> {
    Ok(nt.w2.add(&nt.w1.cup(&nt.w1)?)?)
}

/// Whether `[w₂] = [w₁²]`.
pub fn kreck_condition(nt: &NormalOneType) -> Result<bool, ObstructionError> {
    Ok(crate::cohomology::is_coboundary(&kreck_cocycle(nt)?)?)
}

/// `Sq²x + w₁ ∪ Sq¹x + w₂ ∪ x` on a closed cochain of the base.
pub fn sq2_w(nt: &NormalOneType, x: &Cochain) -> Result<Cochain, SimplicialError> {
    let sq1 = nt.w1.cup(&x.sq(1)?)?;
    x.sq(2)?.add(&sq1)?.add(&nt.w2.cup(x)?)
}

/// `Sq²_w : H^p -> H^{p+2}` in the standard bases.
#[derive(Clone, Debug)]
pub struct TwistedSquare {
    pub domain: CohomologyBasis,
    pub codomain: CohomologyBasis,
    pub matrix: F2Matrix,
}

impl TwistedSquare {
    /// The codomain is the top degree of the model and may be too large.
    pub fn is_truncated(&self) -> bool {
        self.codomain.is_truncated()
    }

    pub fn image(&self) -> Subspace {
        Subspace::column_space(&self.matrix)
    }
}

/// The matrix of `Sq²_w` out of degree `p`. The codomain must be exact
/// (`p + 3 <= max_degree`) unless `allow_truncated`.
pub fn sq2_w_operator(nt: &NormalOneType, p: usize, allow_truncated: bool) -> Result<TwistedSquare, ObstructionError> {
    let domain = cohomology_basis(&nt.base, p)?;
    let codomain = if allow_truncated {
        cohomology_basis_allow_truncated(&nt.base, p + 2)?
    } else {
        cohomology_basis(&nt.base, p + 2)?
    };
    let matrix = operator_matrix(&domain, &codomain, |x| Ok(sq2_w(nt, x)?))?;
    Ok(TwistedSquare { domain, codomain, matrix })
}

/// What is known about `H₅(π; ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum H5Status {
    Zero { source: H5Source },
    Nonzero { group: AbelianGroupInvariants },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "provenance", rename_all = "snake_case")]
pub enum H5Source {
    Computed,
    Asserted(String),
}

/// Computed when the model has degree-6 cells listed or no 5-cells at all;
/// otherwise the user's assertion, if any.
pub fn h5_check(nt: &NormalOneType) -> Result<H5Status, ObstructionError> {
    let base = &nt.base;
    if base.max_degree() >= 5 && base.count(5) == 0 {
        return Ok(H5Status::Zero { source: H5Source::Computed });
    }
    if base.max_degree() >= 6 {
        let group = homology(base, 5, Coefficients::Integers, Twist::None, false)?;
        return Ok(if group.is_zero() {
            H5Status::Zero { source: H5Source::Computed }
        } else {
            H5Status::Nonzero { group }
        });
    }
    Ok(match &nt.assertions.h5_zero {
        Some(p) => H5Status::Zero { source: H5Source::Asserted(p.clone()) },
        None => H5Status::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{builders, product};

    fn rp(w2_is_square: bool) -> NormalOneType {
        let m = Arc::new(builders::bar_b_z2(6));
        let x = Cochain::from_support(&m, 1, &[0]).unwrap();
        let w2 = if w2_is_square { x.cup(&x).unwrap() } else { Cochain::zero(&m, 2).unwrap() };
        NormalOneType::new(m, x, w2)
    }

    pub(crate) fn torus_type() -> NormalOneType {
        let s = Arc::new(builders::circle());
        let t = product(&s, &s, 6).unwrap();
        let e1 = t.projection_left().pullback(&Cochain::from_support(&s, 1, &[0]).unwrap()).unwrap();
        let e2 = t.projection_right().pullback(&Cochain::from_support(&s, 1, &[0]).unwrap()).unwrap();
        let w2 = e1.cup(&e2).unwrap();
        NormalOneType::new(t.model, e1, w2)
    }

    #[test]
    fn orientable_and_short_inputs_are_rejected() {
        let m = Arc::new(builders::bar_b_z2(6));
        let nt = NormalOneType::new(m.clone(), Cochain::zero(&m, 1).unwrap(), Cochain::zero(&m, 2).unwrap());
        assert_eq!(validate_normal_type(&nt).len(), 1);
        let short = Arc::new(builders::bar_b_z2(3));
        let x = Cochain::from_support(&short, 1, &[0]).unwrap();
        let nt = NormalOneType::new(short.clone(), x, Cochain::zero(&short, 2).unwrap());
        assert!(!validate_normal_type(&nt).is_empty());
        assert!(validate_normal_type(&rp(false)).is_empty());
    }

    #[test]
    fn open_cochain_is_reported() {
        let mut nt = torus_type();
        nt.w1 = Cochain::from_support(&nt.base, 1, &[0]).unwrap();
        let reasons = validate_normal_type(&nt);
        assert_eq!(reasons, vec!["w1 is not closed".to_string()]);
    }

    #[test]
    fn primary_obstruction_on_projective_space() {
        assert!(!primary_obstruction(&rp(false)).unwrap().is_zero());
        assert!(primary_obstruction(&rp(true)).unwrap().is_zero());
    }

    #[test]
    fn torus_data_has_vanishing_primary_and_fails_kreck() {
        let nt = torus_type();
        assert!(primary_obstruction(&nt).unwrap().is_zero());
        assert!(!kreck_condition(&nt).unwrap());
    }

    #[test]
    fn kreck_condition_on_projective_space() {
        assert!(kreck_condition(&rp(true)).unwrap());
        assert!(!kreck_condition(&rp(false)).unwrap());
    }

    #[test]
    fn twisted_square_of_the_square_class() {
        let nt = rp(false);
        let op = sq2_w_operator(&nt, 2, false).unwrap();
        assert_eq!(op.matrix, F2Matrix::identity(1));
        let kreck = rp(true);
        assert!(sq2_w_operator(&kreck, 2, false).unwrap().matrix.is_zero());
    }

    #[test]
    fn twisted_square_needs_an_exact_codomain() {
        let m = Arc::new(builders::bar_b_z2(5));
        let x = Cochain::from_support(&m, 1, &[0]).unwrap();
        let nt = NormalOneType::new(m.clone(), x, Cochain::zero(&m, 2).unwrap());
        assert!(sq2_w_operator(&nt, 3, false).is_err());
        assert!(sq2_w_operator(&nt, 3, true).unwrap().is_truncated());
    }

    #[test]
    fn h5_of_projective_space_is_two_torsion() {
        assert_eq!(h5_check(&rp(false)).unwrap(), H5Status::Nonzero { group: AbelianGroupInvariants::cyclic(2) });
        assert_eq!(h5_check(&torus_type()).unwrap(), H5Status::Zero { source: H5Source::Computed });
        let m = Arc::new(builders::bar_b_z2(5));
        let x = Cochain::from_support(&m, 1, &[0]).unwrap();
        let nt = NormalOneType::new(m.clone(), x, Cochain::zero(&m, 2).unwrap());
        assert_eq!(h5_check(&nt).unwrap(), H5Status::Unknown);
    }
}
