//! The secondary obstruction through lift data on the double cover.
//!
//! A lift datum is a closed `a ∈ C²(X̃)` with `[a + T^#a] = [p^#w₂]`. The
//! class `A = [a ∪ T^#a]` is the pullback of the obstruction to the cover.

use std::sync::Arc;

use crate::cohomology::{class_normal_form, coboundary_witness, cohomology_basis, operator_matrix, CohomologyBasis};
use crate::linalg::{F2Matrix, F2Vector, Subspace};
use crate::simplicial::{builders, Cochain, SimplicialError, SimplicialMap};

use super::{sq2_w, sq2_w_operator, DoubleCoverData, NormalOneType, ObstructionError};

/// A lift datum with the correction `b` making
/// `a + T^#a + δb = p^#w₂` hold on the nose.
#[derive(Clone, Debug)]
pub struct LiftDatum {
    pub a: Cochain,
    pub correction: Cochain,
}

fn check_cover(nt: &NormalOneType, cover: &DoubleCoverData) -> Result<(), ObstructionError> {
    if !Arc::ptr_eq(cover.base(), &nt.base) {
        return Err(SimplicialError::ModelMismatch.into());
    }
    if !cover.realizes(&nt.w1)? {
        return Err(ObstructionError::InvalidCover("the cover does not realize w1".into()));
    }
    Ok(())
}

impl LiftDatum {
    pub fn new(nt: &NormalOneType, cover: &DoubleCoverData, a: Cochain) -> Result<Self, ObstructionError> {
        check_cover(nt, cover)?;
        if !Arc::ptr_eq(a.model(), cover.cover()) || a.degree() != 2 {
            return Err(ObstructionError::InvalidLift("a must be a 2-cochain on the cover".into()));
        }
        if !a.is_closed() {
            return Err(ObstructionError::InvalidLift("a is not closed".into()));
        }
        let defect = a.add(&cover.involution().pullback(&a)?)?.add(&cover.pullback(&nt.w2)?)?;
        let correction = coboundary_witness(&defect)?
            .ok_or_else(|| ObstructionError::InvalidLift("[a + T^#a] differs from [p^#w2]".into()))?;
        Ok(LiftDatum { a, correction })
    }
}

/// All lift data up to cohomology: `particular + ker(1 + T^*)` in the
/// coordinates of `H²(X̃)`.
#[derive(Clone, Debug)]
pub struct LiftSolutions {
    pub basis: CohomologyBasis,
    pub particular: F2Vector,
    pub kernel: Subspace,
}

impl LiftSolutions {
    /// `log₂` of the number of solution classes.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.dim()
    }

    /// The class `particular + Σ_{j ∈ choice} kernel_j`.
    pub fn coordinates(&self, choice: &F2Vector) -> F2Vector {
        self.particular.xor(&self.kernel.combine(choice))
    }

    pub fn datum(
        &self,
        nt: &NormalOneType,
        cover: &DoubleCoverData,
        choice: &F2Vector,
    ) -> Result<LiftDatum, ObstructionError> {
        LiftDatum::new(nt, cover, self.basis.class_of(&self.coordinates(choice)))
    }
}

/// Solves `(1 + T^*) α = [p^#w₂]` on `H²(X̃)`; `None` when no lift datum
/// exists.
pub fn lift_data_solutions(
    nt: &NormalOneType,
    cover: &DoubleCoverData,
) -> Result<Option<LiftSolutions>, ObstructionError> {
    check_cover(nt, cover)?;
    let basis = cohomology_basis(cover.cover(), 2)?;
    let t = cover.involution();
    let m = operator_matrix(&basis, &basis, |u| Ok(t.pullback(u)?.add(u)?))?;
    let rhs = basis.coordinates(&cover.pullback(&nt.w2)?)?;
    Ok(m.solve_affine(&rhs)?.map(|sol| LiftSolutions { basis, particular: sol.particular, kernel: sol.kernel }))
}

/// `a ∪ T^#a`.
pub fn secondary_witness(cover: &DoubleCoverData, datum: &LiftDatum) -> Result<Cochain, ObstructionError> {
    Ok(datum.a.cup(&cover.involution().pullback(&datum.a)?)?)
}

/// `p^#(Im Sq²_w) + B⁴(X̃)` inside `C⁴(X̃)`, kept as normal forms modulo
/// `B⁴(X̃)`.
#[derive(Clone, Debug)]
pub struct RestrictedImage {
    /// Cocycle representatives of a basis of `H²(X)`.
    pub generators: Vec<Cochain>,
    pub normal_forms: Subspace,
}

impl RestrictedImage {
    pub fn contains(&self, u: &Cochain) -> Result<bool, ObstructionError> {
        Ok(self.normal_forms.contains(&class_normal_form(u)?)?)
    }
}

pub fn restricted_image(nt: &NormalOneType, cover: &DoubleCoverData) -> Result<RestrictedImage, ObstructionError> {
    let generators = cohomology_basis(&nt.base, 2)?.representatives();
    let forms = generators
        .iter()
        .map(|x| Ok(class_normal_form(&cover.pullback(&sq2_w(nt, x)?)?)?))
        .collect::<Result<Vec<_>, ObstructionError>>()?;
    let normal_forms = Subspace::from_spanning(cover.cover().count(4), forms)?;
    Ok(RestrictedImage { generators, normal_forms })
}

/// A map `s` from a truncation of `B(ℤ/2)` into the base with `s^#w₁`
/// generating `H¹(B(ℤ/2))`.
#[derive(Clone, Debug)]
pub struct SectionDatum {
    pub map: SimplicialMap,
}

impl SectionDatum {
    pub fn new(nt: &NormalOneType, map: SimplicialMap) -> Result<Self, ObstructionError> {
        let bad = |why: &str| ObstructionError::InvalidSection(why.to_string());
        if !Arc::ptr_eq(map.target(), &nt.base) {
            return Err(bad("the section does not land in the base"));
        }
        let source = map.source();
        if source.max_degree() < 4 || !source.same_cells(&builders::bar_b_z2(source.max_degree())) {
            return Err(bad("the section's source must be B(Z/2) through degree 4 or more"));
        }
        if !map.violations().is_empty() {
            return Err(bad("the section is not simplicial"));
        }
        if class_normal_form(&map.pullback(&nt.w1)?)?.is_zero() {
            return Err(bad("s^#w1 does not generate H^1"));
        }
        Ok(SectionDatum { map })
    }
}

#[derive(Clone, Debug)]
pub enum SecondaryOutcome {
    /// `A ∉ p^*(Im Sq²_w)`.
    Nonzero { witness: Cochain },
    /// The unique `ω` with `p^*ω = A`, `s^*ω = 0` satisfies
    /// `ω + Sq²_w(preimage) ∈ B⁴`.
    Zero { omega: Cochain, preimage: Cochain },
    Inconclusive { reason: String },
}

pub(crate) fn zero_branch(
    nt: &NormalOneType,
    cover: &DoubleCoverData,
    witness: &Cochain,
    section: &SectionDatum,
) -> Result<SecondaryOutcome, ObstructionError> {
    let inconclusive = |reason: &str| Ok(SecondaryOutcome::Inconclusive { reason: reason.to_string() });
    if nt.base.max_degree() < 5 {
        return inconclusive("pinning down a class of H^4 needs cells through degree 5");
    }
    let h4 = cohomology_basis(&nt.base, 4)?;
    let n_cover = cover.cover().count(4);
    let n_section = section.map.source().count(4);
    let columns = h4
        .representatives()
        .iter()
        .map(|r| {
            let up = class_normal_form(&cover.pullback(r)?)?;
            let down = class_normal_form(&section.map.pullback(r)?)?;
            Ok(up.concat(&down))
        })
        .collect::<Result<Vec<_>, ObstructionError>>()?;
    let restriction = F2Matrix::from_columns(n_cover + n_section, &columns);
    if restriction.rank() < h4.dim() {
        return inconclusive("ker p^* and ker s^* meet nontrivially on H^4");
    }
    let rhs = class_normal_form(witness)?.concat(&F2Vector::zeros(n_section));
    let Some(sol) = restriction.solve_affine(&rhs)? else {
        return inconclusive("no class of H^4 restricts to the witness and vanishes on the section");
    };
    let omega = h4.class_of(&sol.particular);
    let square = sq2_w_operator(nt, 2, false)?;
    let Some(pre) = square.matrix.solve_affine(&sol.particular)? else {
        return inconclusive("the determined class lies outside the image of Sq^2_w");
    };
    let preimage = square.domain.class_of(&pre.particular);
    Ok(SecondaryOutcome::Zero { omega, preimage })
}

/// Nonzero when the witness of `datum` misses the restricted image;
/// otherwise Zero when a section pins the obstruction down and it lies in
/// the image; otherwise Inconclusive.
pub fn secondary_test(
    nt: &NormalOneType,
    cover: &DoubleCoverData,
    datum: &LiftDatum,
    section: Option<&SectionDatum>,
) -> Result<SecondaryOutcome, ObstructionError> {
    let witness = secondary_witness(cover, datum)?;
    if !restricted_image(nt, cover)?.contains(&witness)? {
        return Ok(SecondaryOutcome::Nonzero { witness });
    }
    match section {
        Some(s) => zero_branch(nt, cover, &witness, s),
        None => Ok(SecondaryOutcome::Inconclusive { reason: "the witness lies in the restricted image".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{Degeneracy, Target};

    /// `B(ℤ/2)` with its contractible cover and the identity section.
    fn projective(w2_is_square: bool) -> (NormalOneType, DoubleCoverData, SectionDatum) {
        let e = Arc::new(builders::bar_e_z2(6));
        let cover = DoubleCoverData::quotient(builders::bar_e_z2_shift(&e).unwrap()).unwrap();
        let base = cover.base().clone();
        let x = Cochain::from_support(&base, 1, &[0]).unwrap();
        let w2 = if w2_is_square { x.cup(&x).unwrap() } else { Cochain::zero(&base, 2).unwrap() };
        let nt = NormalOneType::new(base.clone(), x, w2);
        let rp = Arc::new(builders::bar_b_z2(6));
        let assignment = (0..=6).map(|_| vec![Target::new(Degeneracy::IDENTITY, 0)]).collect();
        let s = SimplicialMap::new(rp, base, assignment).unwrap();
        let section = SectionDatum::new(&nt, s).unwrap();
        (nt, cover, section)
    }

    #[test]
    fn zero_lift_solves_a_null_system() {
        let (nt, cover, _) = projective(false);
        let sols = lift_data_solutions(&nt, &cover).unwrap().unwrap();
        assert_eq!(sols.basis.dim(), 0);
        let datum = sols.datum(&nt, &cover, &F2Vector::zeros(0)).unwrap();
        assert!(datum.a.is_zero());
    }

    #[test]
    fn trivial_witness_with_section_is_certified_zero() {
        let (nt, cover, section) = projective(false);
        let datum = LiftDatum::new(&nt, &cover, Cochain::zero(cover.cover(), 2).unwrap()).unwrap();
        match secondary_test(&nt, &cover, &datum, Some(&section)).unwrap() {
            SecondaryOutcome::Zero { omega, .. } => assert!(class_normal_form(&omega).unwrap().is_zero()),
            other => panic!("expected Zero, got {other:?}"),
        }
        assert!(matches!(
            secondary_test(&nt, &cover, &datum, None).unwrap(),
            SecondaryOutcome::Inconclusive { .. }
        ));
    }

    #[test]
    fn section_must_detect_w1() {
        let (nt, _, section) = projective(false);
        let constant = builders::constant_map(section.map.source(), &nt.base, 0).unwrap();
        assert!(matches!(SectionDatum::new(&nt, constant), Err(ObstructionError::InvalidSection(_))));
    }

    #[test]
    fn lift_with_the_wrong_class_is_rejected() {
        let (nt, cover, _) = projective(true);
        let zero = Cochain::zero(cover.cover(), 2).unwrap();
        // p^#x² is a coboundary on the contractible cover, so a = 0 works.
        assert!(LiftDatum::new(&nt, &cover, zero).is_ok());
        let open = Cochain::from_support(cover.cover(), 2, &[0]).unwrap();
        assert!(matches!(LiftDatum::new(&nt, &cover, open), Err(ObstructionError::InvalidLift(_))));
    }
}
