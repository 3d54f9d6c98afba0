//! The decision procedure and its replayable evidence.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::coboundary_witness;
use crate::linalg::{F2Matrix, F2Vector};
use crate::simplicial::Cochain;

use super::secondary::zero_branch;
use super::{
    h5_check, kreck_cocycle, lift_data_solutions, primary_cocycle, primary_obstruction, restricted_image,
    secondary_witness, sq2_w, validate_normal_type, DoubleCoverData, H5Status, LiftDatum, NormalOneType,
    ObstructionError, SecondaryOutcome, SectionDatum,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    InvalidInput,
    NoExoticaPrimary,
    ExoticaExistKreck,
    ExoticaExistCd3,
    NoExoticaSecondary,
    ExoticaExistSecondary,
    Undetermined,
}

impl Outcome {
    /// Stable identifier of the criterion that fired.
    pub fn clause(self) -> &'static str {
        match self {
            Outcome::InvalidInput => "input-validation",
            Outcome::NoExoticaPrimary => "primary-obstruction-nonzero",
            Outcome::ExoticaExistKreck => "kreck-condition",
            Outcome::ExoticaExistCd3 => "cohomological-dimension-at-most-3",
            Outcome::NoExoticaSecondary => "secondary-obstruction-nonzero",
            Outcome::ExoticaExistSecondary => "secondary-obstruction-zero-and-h5-vanishes",
            Outcome::Undetermined => "undetermined",
        }
    }

    pub fn headline(self) -> &'static str {
        match self {
            Outcome::InvalidInput => "INVALID INPUT",
            Outcome::NoExoticaPrimary => "NO EXOTICA (primary obstruction w₁³+w₁w₂ ≠ 0)",
            Outcome::ExoticaExistKreck => "EXOTICA EXIST (w₂ = w₁²)",
            Outcome::ExoticaExistCd3 => "EXOTICA EXIST (w₁³ = w₁w₂ and cohomological dimension at most 3)",
            Outcome::NoExoticaSecondary => "NO EXOTICA (secondary obstruction [f*𝔬] ≠ 0)",
            Outcome::ExoticaExistSecondary => "EXOTICA EXIST (secondary obstruction [f*𝔬] = 0 and H₅(π;ℤ) = 0)",
            Outcome::Undetermined => "UNDETERMINED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecideConfig {
    /// Most lift-datum classes examined before sampling takes over.
    pub cap: u64,
    pub seed: u64,
    /// Permit H⁴ conclusions on models that stop at degree 4.
    pub allow_truncated: bool,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig { cap: 1 << 16, seed: 0, allow_truncated: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimaryEvidence {
    pub representative: Vec<usize>,
    pub coordinates: Vec<usize>,
    pub vanishes: bool,
    /// `c` with `δc` equal to the representative.
    pub primitive: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KreckEvidence {
    pub holds: bool,
    /// `b` with `δb = w₂ + w₁²`.
    pub primitive: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftEvidence {
    pub explicit: bool,
    /// `dim ker(1 + T^*)` on `H²` of the cover.
    pub solution_dim: Option<usize>,
    /// Position in the enumeration of the datum reported.
    pub ordinal: u64,
    pub examined: u64,
    pub complete: bool,
    /// Kernel directions added to the particular solution.
    pub choice: Vec<usize>,
    pub a: Vec<usize>,
    pub correction: Vec<usize>,
    pub witness: Vec<usize>,
    pub in_restricted_image: bool,
    /// Cocycles spanning `H²` of the base.
    pub image_generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionEvidence {
    pub omega: Vec<usize>,
    pub preimage: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub reasons: Vec<String>,
    pub primary: Option<PrimaryEvidence>,
    pub kreck: Option<KreckEvidence>,
    pub cd_at_most_3: Option<String>,
    pub lift: Option<LiftEvidence>,
    pub section: Option<SectionEvidence>,
    pub h5: Option<H5Status>,
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub clause: &'static str,
    pub summary: String,
    pub evidence: Evidence,
}

impl Verdict {
    fn new(outcome: Outcome, evidence: Evidence) -> Self {
        let summary = match outcome {
            Outcome::InvalidInput => format!("{}: {}", outcome.headline(), evidence.reasons.join("; ")),
            _ => outcome.headline().to_string(),
        };
        Verdict { outcome, clause: outcome.clause(), summary, evidence }
    }
}

fn input_reasons(
    nt: &NormalOneType,
    cover: Option<&DoubleCoverData>,
    lift: Option<&Cochain>,
    section: Option<&SectionDatum>,
) -> Vec<String> {
    let mut reasons = validate_normal_type(nt);
    if !reasons.is_empty() {
        return reasons;
    }
    if let Some(c) = cover {
        if !Arc::ptr_eq(c.base(), &nt.base) {
            reasons.push("the cover lies over a different model".into());
        } else if !c.realizes(&nt.w1).unwrap_or(false) {
            reasons.push("the cover does not realize w1".into());
        }
    }
    if let Some(s) = section {
        if !Arc::ptr_eq(s.map.target(), &nt.base) {
            reasons.push("the section lands in a different model".into());
        }
    }
    match (lift, cover) {
        (Some(_), None) => reasons.push("a lift datum needs a cover".into()),
        (Some(a), Some(c)) if reasons.is_empty() => {
            if let Err(e) = LiftDatum::new(nt, c, a.clone()) {
                reasons.push(e.to_string());
            }
        }
        _ => {}
    }
    reasons
}

fn lift_evidence(datum: &LiftDatum, generators: &[Cochain], witness: &Cochain, in_image: bool) -> LiftEvidence {
    LiftEvidence {
        explicit: false,
        solution_dim: None,
        ordinal: 0,
        examined: 0,
        complete: false,
        choice: Vec::new(),
        a: datum.a.support(),
        correction: datum.correction.support(),
        witness: witness.support(),
        in_restricted_image: in_image,
        image_generators: generators.iter().map(Cochain::support).collect(),
    }
}

/// Runs the decision procedure. `lift` is an optional closed 2-cochain on
/// the cover to try before enumerating.
pub fn decide(
    nt: &NormalOneType,
    cover: Option<&DoubleCoverData>,
    lift: Option<&Cochain>,
    section: Option<&SectionDatum>,
    config: &DecideConfig,
) -> Result<Verdict, ObstructionError> {
    let mut ev = Evidence::default();
    let reasons = input_reasons(nt, cover, lift, section);
    if !reasons.is_empty() {
        ev.reasons = reasons;
        return Ok(Verdict::new(Outcome::InvalidInput, ev));
    }

    let primary = primary_obstruction(nt)?;
    let vanishes = primary.is_zero();
    let primitive = if vanishes { coboundary_witness(&primary.representative)?.map(|c| c.support()) } else { None };
    ev.primary = Some(PrimaryEvidence {
        representative: primary.representative.support(),
        coordinates: primary.coordinates.support(),
        vanishes,
        primitive,
    });
    if !vanishes {
        return Ok(Verdict::new(Outcome::NoExoticaPrimary, ev));
    }

    let kreck = coboundary_witness(&kreck_cocycle(nt)?)?;
    ev.kreck = Some(KreckEvidence { holds: kreck.is_some(), primitive: kreck.as_ref().map(Cochain::support) });
    if kreck.is_some() {
        return Ok(Verdict::new(Outcome::ExoticaExistKreck, ev));
    }

    if let Some(p) = &nt.assertions.cd_at_most_3 {
        ev.cd_at_most_3 = Some(p.clone());
        return Ok(Verdict::new(Outcome::ExoticaExistCd3, ev));
    }

    let Some(cover) = cover else {
        ev.caveats.push("no double cover supplied; the secondary obstruction was not evaluated".into());
        return Ok(Verdict::new(Outcome::Undetermined, ev));
    };
    if nt.base.max_degree() < 5 {
        if !config.allow_truncated {
            ev.caveats.push("H^4 conclusions need cells through degree 5; secondary steps skipped".into());
            return Ok(Verdict::new(Outcome::Undetermined, ev));
        }
        ev.caveats.push("the model stops at degree 4, so H^4 may be too large".into());
    }

    let image = restricted_image(nt, cover)?;
    let mut first: Option<(LiftDatum, Cochain, LiftEvidence)> = None;
    let mut examined = 0u64;
    if let Some(a) = lift {
        let datum = LiftDatum::new(nt, cover, a.clone())?;
        let witness = secondary_witness(cover, &datum)?;
        let in_image = image.contains(&witness)?;
        examined += 1;
        let mut le = lift_evidence(&datum, &image.generators, &witness, in_image);
        le.explicit = true;
        le.examined = examined;
        if !in_image {
            ev.lift = Some(le);
            return Ok(Verdict::new(Outcome::NoExoticaSecondary, ev));
        }
        first = Some((datum, witness, le));
    }

    match lift_data_solutions(nt, cover)? {
        None => ev.caveats.push("no lift datum exists on this cover".into()),
        Some(sols) => {
            let d = sols.kernel_dim();
            let total = (d < 64).then(|| 1u64 << d);
            let complete = total.is_some_and(|t| t <= config.cap);
            let budget = if complete { total.unwrap_or(0) } else { config.cap.max(1) };
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for ordinal in 0..budget {
                let choice = if complete || ordinal == 0 {
                    F2Vector::from_bits(&(0..d).map(|j| ordinal >> j & 1 == 1).collect::<Vec<_>>())
                } else {
                    F2Vector::from_bits(&(0..d).map(|_| rng.gen()).collect::<Vec<_>>())
                };
                let datum = sols.datum(nt, cover, &choice)?;
                let witness = secondary_witness(cover, &datum)?;
                let in_image = image.contains(&witness)?;
                examined += 1;
                let mut le = lift_evidence(&datum, &image.generators, &witness, in_image);
                le.solution_dim = Some(d);
                le.ordinal = ordinal;
                le.examined = examined;
                le.complete = complete;
                le.choice = choice.support();
                if !in_image {
                    ev.lift = Some(le);
                    return Ok(Verdict::new(Outcome::NoExoticaSecondary, ev));
                }
                if first.is_none() {
                    first = Some((datum, witness, le));
                }
            }
            if !complete {
                ev.caveats.push(format!("lift data sampled: {examined} of 2^{d} classes examined"));
            }
        }
    }

    let Some((_, witness, mut le)) = first else {
        return Ok(Verdict::new(Outcome::Undetermined, ev));
    };
    le.examined = examined;
    ev.lift = Some(le);
    let Some(section) = section else {
        ev.caveats.push("every examined witness lies in the restricted image and no section was supplied".into());
        return Ok(Verdict::new(Outcome::Undetermined, ev));
    };
    match zero_branch(nt, cover, &witness, section)? {
        SecondaryOutcome::Zero { omega, preimage } => {
            ev.section = Some(SectionEvidence { omega: omega.support(), preimage: preimage.support() });
            let h5 = h5_check(nt)?;
            let zero = matches!(h5, H5Status::Zero { .. });
            ev.h5 = Some(h5);
            if zero {
                return Ok(Verdict::new(Outcome::ExoticaExistSecondary, ev));
            }
            ev.caveats.push("the secondary obstruction vanishes but H_5 is not known to vanish".into());
        }
        SecondaryOutcome::Inconclusive { reason } => ev.caveats.push(reason),
        SecondaryOutcome::Nonzero { .. } => unreachable!("the zero branch never reports Nonzero"),
    }
    Ok(Verdict::new(Outcome::Undetermined, ev))
}

/// `δu` straight from the face maps, bypassing the cached matrices.
fn direct_coboundary(u: &Cochain) -> F2Vector {
    let m = u.model();
    let k = u.degree();
    let mut out = F2Vector::zeros(m.count(k + 1));
    for c in 0..m.count(k + 1) {
        let v = m.faces_of(k + 1, c).iter().filter_map(|t| t.nondegenerate()).fold(false, |acc, f| acc ^ u.at(f));
        out.set(c, v);
    }
    out
}

/// Whether `v ∈ C^k` is `δ` of something, by solving the linear system.
fn solvable(model: &crate::simplicial::SimplicialModel, k: usize, v: &F2Vector) -> Result<bool, String> {
    let d = model.coboundary(k - 1).map_err(|e| e.to_string())?;
    Ok(d.solve_affine(v).map_err(|e| e.to_string())?.is_some())
}

fn cochain(model: &Arc<crate::simplicial::SimplicialModel>, k: usize, s: &[usize]) -> Result<Cochain, String> {
    Cochain::from_support(model, k, s).map_err(|e| e.to_string())
}

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn replay_lift(
    nt: &NormalOneType,
    cover: &DoubleCoverData,
    le: &LiftEvidence,
) -> Result<Cochain, String> {
    let err = |e: ObstructionError| e.to_string();
    let total = cover.cover();
    let a = cochain(total, 2, &le.a)?;
    let b = cochain(total, 1, &le.correction)?;
    ensure(direct_coboundary(&a).is_zero(), "lift datum is not closed")?;
    let ta = cover.involution().pullback(&a).map_err(|e| e.to_string())?;
    let lhs = a.values().xor(ta.values()).xor(&direct_coboundary(&b));
    ensure(lhs == *cover.pullback(&nt.w2).map_err(err)?.values(), "a + T^#a + δb differs from p^#w2")?;
    let witness = a.cup(&ta).map_err(|e| e.to_string())?;
    ensure(witness.support() == le.witness, "recorded witness differs from a ∪ T^#a")?;
    Ok(witness)
}

fn replay_generators(nt: &NormalOneType, gens: &[Vec<usize>]) -> Result<Vec<Cochain>, String> {
    let base = &nt.base;
    let g = gens.iter().map(|s| cochain(base, 2, s)).collect::<Result<Vec<_>, _>>()?;
    for x in &g {
        ensure(direct_coboundary(x).is_zero(), "an image generator is not closed")?;
    }
    let d1 = base.coboundary(1).map_err(|e| e.to_string())?;
    let d2 = base.coboundary(2).map_err(|e| e.to_string())?;
    let h2 = base.count(2) - d2.rank() - d1.rank();
    ensure(g.len() == h2, "image generators do not match dim H^2")?;
    let cols: Vec<F2Vector> = g.iter().map(|x| x.values().clone()).collect();
    let joined = d1.augment(&F2Matrix::from_columns(base.count(2), &cols)).map_err(|e| e.to_string())?;
    ensure(joined.rank() == d1.rank() + g.len(), "image generators are dependent modulo coboundaries")?;
    Ok(g)
}

/// Re-verifies a verdict's evidence from scratch, through routes that do
/// not share the decision's cached bases.
pub fn replay(
    verdict: &Verdict,
    nt: &NormalOneType,
    cover: Option<&DoubleCoverData>,
    lift: Option<&Cochain>,
    section: Option<&SectionDatum>,
) -> Result<(), String> {
    let ev = &verdict.evidence;
    ensure(verdict.clause == verdict.outcome.clause(), "clause does not match the outcome")?;
    let reasons = input_reasons(nt, cover, lift, section);
    if verdict.outcome == Outcome::InvalidInput {
        return ensure(!reasons.is_empty() && reasons == ev.reasons, "validation reasons differ");
    }
    ensure(reasons.is_empty(), "input is invalid")?;

    let primary = ev.primary.as_ref().ok_or("missing primary evidence")?;
    let rep = primary_cocycle(nt).map_err(|e| e.to_string())?;
    ensure(rep.support() == primary.representative, "primary representative differs")?;
    if verdict.outcome == Outcome::NoExoticaPrimary {
        ensure(!primary.vanishes, "primary obstruction recorded as vanishing")?;
        return ensure(!solvable(&nt.base, 3, rep.values())?, "primary obstruction is a coboundary");
    }
    let c = cochain(&nt.base, 2, primary.primitive.as_deref().ok_or("missing primary primitive")?)?;
    ensure(direct_coboundary(&c) == *rep.values(), "primary primitive is wrong")?;

    let kreck = ev.kreck.as_ref().ok_or("missing Kreck evidence")?;
    let kc = kreck_cocycle(nt).map_err(|e| e.to_string())?;
    if verdict.outcome == Outcome::ExoticaExistKreck {
        let b = cochain(&nt.base, 1, kreck.primitive.as_deref().ok_or("missing Kreck primitive")?)?;
        return ensure(kreck.holds && direct_coboundary(&b) == *kc.values(), "Kreck primitive is wrong");
    }
    ensure(!kreck.holds && !solvable(&nt.base, 2, kc.values())?, "w2 + w1^2 is a coboundary")?;

    if verdict.outcome == Outcome::ExoticaExistCd3 {
        return ensure(
            ev.cd_at_most_3.is_some() && ev.cd_at_most_3 == nt.assertions.cd_at_most_3,
            "cohomological dimension assertion missing",
        );
    }
    ensure(nt.assertions.cd_at_most_3.is_none(), "an asserted cd bound was ignored")?;

    match verdict.outcome {
        Outcome::NoExoticaSecondary => {
            let cover = cover.ok_or("the verdict needs the cover")?;
            let le = ev.lift.as_ref().ok_or("missing lift evidence")?;
            let witness = replay_lift(nt, cover, le)?;
            let gens = replay_generators(nt, &le.image_generators)?;
            let total = cover.cover();
            let d3 = total.coboundary(3).map_err(|e| e.to_string())?;
            let cols = gens
                .iter()
                .map(|x| {
                    let y = sq2_w(nt, x).map_err(|e| e.to_string())?;
                    Ok(cover.pullback(&y).map_err(|e| e.to_string())?.into_values())
                })
                .collect::<Result<Vec<_>, String>>()?;
            let system = d3.augment(&F2Matrix::from_columns(total.count(4), &cols)).map_err(|e| e.to_string())?;
            let hit = system.solve_affine(witness.values()).map_err(|e| e.to_string())?;
            ensure(hit.is_none() && !le.in_restricted_image, "witness lies in the restricted image")
        }
        Outcome::ExoticaExistSecondary => {
            let cover = cover.ok_or("the verdict needs the cover")?;
            let section = section.ok_or("the verdict needs the section")?;
            let le = ev.lift.as_ref().ok_or("missing lift evidence")?;
            let se = ev.section.as_ref().ok_or("missing section evidence")?;
            let witness = replay_lift(nt, cover, le)?;
            let omega = cochain(&nt.base, 4, &se.omega)?;
            let pre = cochain(&nt.base, 2, &se.preimage)?;
            ensure(direct_coboundary(&omega).is_zero(), "omega is not closed")?;
            ensure(direct_coboundary(&pre).is_zero(), "preimage is not closed")?;
            let up = cover.pullback(&omega).map_err(|e| e.to_string())?;
            ensure(solvable(cover.cover(), 4, &up.values().xor(witness.values()))?, "p^#omega differs from A")?;
            let down = section.map.pullback(&omega).map_err(|e| e.to_string())?;
            ensure(solvable(section.map.source(), 4, down.values())?, "s^#omega is not a coboundary")?;
            let sq = sq2_w(nt, &pre).map_err(|e| e.to_string())?;
            ensure(solvable(&nt.base, 4, &sq.values().xor(omega.values()))?, "omega is not Sq^2_w(preimage)")?;
            match zero_branch(nt, cover, &witness, section).map_err(|e| e.to_string())? {
                SecondaryOutcome::Zero { omega: again, .. } => {
                    ensure(solvable(&nt.base, 4, &again.values().xor(omega.values()))?, "omega is not unique")?;
                }
                _ => return Err("uniqueness no longer holds".into()),
            }
            let h5 = h5_check(nt).map_err(|e| e.to_string())?;
            ensure(matches!(h5, H5Status::Zero { .. }) && ev.h5.as_ref() == Some(&h5), "H_5 status differs")
        }
        Outcome::Undetermined => match (&ev.lift, cover) {
            (Some(le), Some(cover)) => replay_lift(nt, cover, le).map(|_| ()),
            _ => Ok(()),
        },
        _ => unreachable!("handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders;

    fn rp(w2_is_square: bool) -> NormalOneType {
        let m = Arc::new(builders::bar_b_z2(6));
        let x = Cochain::from_support(&m, 1, &[0]).unwrap();
        let w2 = if w2_is_square { x.cup(&x).unwrap() } else { Cochain::zero(&m, 2).unwrap() };
        NormalOneType::new(m, x, w2)
    }

    #[test]
    fn projective_space_verdicts() {
        let cfg = DecideConfig::default();
        let v = decide(&rp(false), None, None, None, &cfg).unwrap();
        assert_eq!(v.outcome, Outcome::NoExoticaPrimary);
        replay(&v, &rp(false), None, None, None).unwrap();
        let nt = rp(true);
        let v = decide(&nt, None, None, None, &cfg).unwrap();
        assert_eq!(v.outcome, Outcome::ExoticaExistKreck);
        replay(&v, &nt, None, None, None).unwrap();
    }

    #[test]
    fn invalid_input_is_a_verdict() {
        let m = Arc::new(builders::bar_b_z2(6));
        let nt = NormalOneType::new(m.clone(), Cochain::zero(&m, 1).unwrap(), Cochain::zero(&m, 2).unwrap());
        let v = decide(&nt, None, None, None, &DecideConfig::default()).unwrap();
        assert_eq!(v.outcome, Outcome::InvalidInput);
        assert!(v.summary.starts_with("INVALID INPUT"));
        replay(&v, &nt, None, None, None).unwrap();
    }

    #[test]
    fn tampered_evidence_fails_replay() {
        let nt = rp(false);
        let mut v = decide(&nt, None, None, None, &DecideConfig::default()).unwrap();
        v.evidence.primary.as_mut().unwrap().representative.clear();
        assert!(replay(&v, &nt, None, None, None).is_err());
    }

    #[test]
    fn lift_without_cover_is_rejected() {
        let nt = rp(false);
        let a = Cochain::zero(&nt.base, 2).unwrap();
        let v = decide(&nt, None, Some(&a), None, &DecideConfig::default()).unwrap();
        assert_eq!(v.outcome, Outcome::InvalidInput);
    }
}
