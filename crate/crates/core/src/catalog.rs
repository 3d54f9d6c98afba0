//! Built-in fixtures: normal 1-types with known verdicts and a stress
//! model for the homology machinery.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::obstruction::{
    decide, Assertions, DecideConfig, DoubleCoverData, NormalOneType, ObstructionError, Outcome, SectionDatum,
    Verdict,
};
use crate::simplicial::{
    builders, product, Cochain, Degeneracy, FreeInvolution, Product, ProductCell, SimplicialError, SimplicialMap,
    SimplicialModel, Target,
};

pub const FIXTURE_NAMES: [&str; 5] = ["rp-w2-zero", "rp-kreck", "z2-remark", "z4-semidirect", "k2-stress"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown fixture {0:?}; known fixtures: {known}", known = FIXTURE_NAMES.join(", "))]
    UnknownFixture(String),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// A base model with named cocycles, and optionally a double cover with
/// its own named cocycles, a lift datum and a section.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub base: Arc<SimplicialModel>,
    /// On `base`; normal 1-types use `w1` and `w2`.
    pub cochains: BTreeMap<String, Cochain>,
    pub assertions: Assertions,
    pub cover: Option<DoubleCoverData>,
    /// On the cover.
    pub cover_cochains: BTreeMap<String, Cochain>,
    /// Name of the cover cochain to try first as a lift datum.
    pub lift: Option<String>,
    pub maps: BTreeMap<String, SimplicialMap>,
    /// Name of the map serving as a section.
    pub section: Option<String>,
    pub expected: Option<Outcome>,
}

impl Fixture {
    fn bare(name: &'static str, summary: &'static str, base: Arc<SimplicialModel>) -> Self {
        Fixture {
            name,
            summary,
            base,
            cochains: BTreeMap::new(),
            assertions: Assertions::default(),
            cover: None,
            cover_cochains: BTreeMap::new(),
            lift: None,
            maps: BTreeMap::new(),
            section: None,
            expected: None,
        }
    }

    pub fn normal_type(&self) -> Option<NormalOneType> {
        let w1 = self.cochains.get("w1")?.clone();
        let w2 = self.cochains.get("w2")?.clone();
        Some(NormalOneType::new(self.base.clone(), w1, w2).with_assertions(self.assertions.clone()))
    }

    pub fn lift_cochain(&self) -> Option<&Cochain> {
        self.cover_cochains.get(self.lift.as_deref()?)
    }

    pub fn section_datum(&self) -> Result<Option<SectionDatum>, ObstructionError> {
        let (Some(nt), Some(name)) = (self.normal_type(), self.section.as_deref()) else {
            return Ok(None);
        };
        SectionDatum::new(&nt, self.maps[name].clone()).map(Some)
    }

    /// Runs the decision procedure with everything the fixture supplies.
    pub fn decide(&self, config: &DecideConfig) -> Option<Result<Verdict, ObstructionError>> {
        let nt = self.normal_type()?;
        Some(self.section_datum().and_then(|s| decide(&nt, self.cover.as_ref(), self.lift_cochain(), s.as_ref(), config)))
    }
}

pub fn fixture(name: &str) -> Result<Fixture, CatalogError> {
    match name {
        "rp-w2-zero" => Ok(projective(false)),
        "rp-kreck" => Ok(projective(true)),
        "z2-remark" => Ok(torus_remark()),
        "z4-semidirect" => z4_semidirect(),
        "k2-stress" => Ok(k2_stress()),
        other => Err(CatalogError::UnknownFixture(other.to_string())),
    }
}

fn generator(model: &Arc<SimplicialModel>, degree: usize) -> Cochain {
    Cochain::from_support(model, degree, &[0]).expect("cell 0 exists")
}

fn projective(kreck: bool) -> Fixture {
    let base = Arc::new(builders::bar_b_z2(6));
    let x = generator(&base, 1);
    let (name, summary, w2, expected) = if kreck {
        ("rp-kreck", "ℝP^∞ through degree 6 with w1 = x, w2 = x²", x.cup(&x).expect("same model"), Outcome::ExoticaExistKreck)
    } else {
        ("rp-w2-zero", "ℝP^∞ through degree 6 with w1 = x, w2 = 0", Cochain::zero(&base, 2).expect("degree 2 exists"), Outcome::NoExoticaPrimary)
    };
    let mut f = Fixture::bare(name, summary, base);
    f.cochains.insert("w1".into(), x);
    f.cochains.insert("w2".into(), w2);
    f.expected = Some(expected);
    f
}

/// The torus `S¹ × S¹` with its two circle classes `e1`, `e2`.
pub fn torus() -> (Product, Cochain, Cochain) {
    let s = Arc::new(builders::circle());
    let t = product(&s, &s, 6).expect("circle is complete through degree 6");
    let c = generator(&s, 1);
    let e1 = t.projection_left().pullback(&c).expect("left factor is the circle");
    let e2 = t.projection_right().pullback(&c).expect("right factor is the circle");
    (t, e1, e2)
}

fn torus_remark() -> Fixture {
    let (t, e1, e2) = torus();
    let mut f = Fixture::bare("z2-remark", "ℤ² via the torus, w1 = e1, w2 = e1e2, cd ≤ 3 asserted", t.model);
    f.cochains.insert("w2".into(), e1.cup(&e2).expect("same model"));
    f.cochains.insert("w1".into(), e1);
    f.assertions.cd_at_most_3 = Some("cd(ℤ²) = 2, classical".into());
    f.expected = Some(Outcome::ExoticaExistCd3);
    f
}

fn k2_stress() -> Fixture {
    let base = Arc::new(builders::k_z2_2(6));
    let mut f = Fixture::bare("k2-stress", "K(ℤ/2, 2) through degree 6 with its fundamental class", base.clone());
    f.cochains.insert("iota".into(), generator(&base, 2));
    f
}

/// The Borel model `((X × X) × E(ℤ/2)) / (swap × shift)` of
/// `π₁(X)² ⋊ ℤ/2`, truncated at `up_to`.
pub struct SwapBorel {
    pub square: Product,
    pub total: Product,
    pub cover: DoubleCoverData,
}

impl SwapBorel {
    /// Pulls a class of the left (`second = false`) or right factor of
    /// `X × X` up to the cover.
    pub fn factor_class(&self, u: &Cochain, second: bool) -> Result<Cochain, SimplicialError> {
        let onto = if second { self.square.projection_right() } else { self.square.projection_left() };
        self.total.projection_left().pullback(&onto.pullback(u)?)
    }

    /// The map `B(ℤ/2) -> base` through the basepoint of `X × X`.
    pub fn basepoint_section(&self) -> Result<SimplicialMap, SimplicialError> {
        let up_to = self.total.model.max_degree();
        let rp = Arc::new(builders::bar_b_z2(up_to));
        let assignment = (0..=up_to)
            .map(|n| {
                let cell = ProductCell {
                    left_dim: 0,
                    left: 0,
                    right_dim: n,
                    right: 0,
                    left_degen: Degeneracy::from_positions(0..n),
                    right_degen: Degeneracy::IDENTITY,
                };
                let c = self.total.index_of(n, &cell).expect("basepoint cells are listed");
                vec![Target::cell(self.cover.orbit()[n][c])]
            })
            .collect();
        SimplicialMap::new(rp, self.cover.base().clone(), assignment)
    }
}

pub fn swap_borel(x: &Arc<SimplicialModel>, up_to: usize) -> Result<SwapBorel, CatalogError> {
    let square = product(x, x, up_to)?;
    let e = Arc::new(builders::bar_e_z2(up_to));
    let total = product(&square.model, &e, up_to)?;
    let shift = builders::bar_e_z2_shift(&e)?;
    let perms = total.product_permutation(&square.swap_permutation(), shift.perms());
    let involution = FreeInvolution::new(total.model.clone(), perms)?;
    let cover = DoubleCoverData::quotient(involution)?;
    Ok(SwapBorel { square, total, cover })
}

/// `π = ℤ⁴ ⋊ ℤ/2` with `a_k ↦ a_{k+2}`, modeled on `T² × T²` with the
/// factor swap. `w2` pulls back to `t1t2 + t3t4` and `w1³ = w1w2`.
fn z4_semidirect() -> Result<Fixture, CatalogError> {
    let (t2, _, _) = torus();
    let borel = swap_borel(&t2.model, 5)?;
    let s = t2.left.clone();
    let c = generator(&s, 1);
    let circle_class = |second_torus: bool, second_circle: bool| -> Result<Cochain, SimplicialError> {
        let onto = if second_circle { t2.projection_right() } else { t2.projection_left() };
        borel.factor_class(&onto.pullback(&c)?, second_torus)
    };
    let t = [circle_class(false, false)?, circle_class(false, true)?, circle_class(true, false)?, circle_class(true, true)?];
    let a = t[0].cup(&t[1])?;
    let cover = &borel.cover;
    let w1 = cover.characteristic().clone();
    let w2 = cover.transfer(&a)?.add(&w1.cup(&w1)?)?;
    let section = borel.basepoint_section()?;

    let mut f = Fixture::bare(
        "z4-semidirect",
        "ℤ⁴ ⋊ ℤ/2 (a_k ↦ a_{k+2}) through degree 5, lift datum a = t1t2 on the cover",
        cover.base().clone(),
    );
    f.cochains.insert("w1".into(), w1);
    f.cochains.insert("w2".into(), w2);
    for (i, ti) in t.into_iter().enumerate() {
        f.cover_cochains.insert(format!("t{}", i + 1), ti);
    }
    f.cover_cochains.insert("a".into(), a);
    f.lift = Some("a".into());
    f.maps.insert("s".into(), section);
    f.section = Some("s".into());
    f.cover = Some(borel.cover);
    f.expected = Some(Outcome::NoExoticaSecondary);
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_builds_a_valid_model() {
        for name in FIXTURE_NAMES {
            let f = fixture(name).unwrap();
            assert!(f.base.validate().is_empty(), "{name}");
            if let Some(c) = &f.cover {
                assert!(c.cover().validate().is_empty(), "{name}");
            }
        }
    }

    #[test]
    fn unknown_names_are_reported() {
        assert!(matches!(fixture("nope"), Err(CatalogError::UnknownFixture(_))));
    }

    #[test]
    fn basepoint_section_detects_w1() {
        let f = fixture("z4-semidirect").unwrap();
        assert!(f.section_datum().unwrap().is_some());
    }

    #[test]
    fn fixtures_reach_their_expected_verdicts() {
        for name in FIXTURE_NAMES {
            let f = fixture(name).unwrap();
            if let Some(expected) = f.expected {
                let v = f.decide(&DecideConfig::default()).unwrap().unwrap();
                assert_eq!(v.outcome, expected, "{name}: {}", v.summary);
            }
        }
    }
}
