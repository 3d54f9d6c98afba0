//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;

use exotica_core::catalog::Fixture;
use exotica_core::obstruction::{DoubleCoverData, NormalOneType, SectionDatum};
use exotica_core::simplicial::builders::random_relabeling;
use exotica_core::simplicial::{Cochain, SimplicialModel};

/// `c` transported along the cell permutations `perms` onto `model`.
pub fn relabel_cochain(c: &Cochain, model: &Arc<SimplicialModel>, perms: &[Vec<usize>]) -> Cochain {
    let n = c.degree();
    let mut support: Vec<usize> = c.support().iter().map(|&i| perms[n][i]).collect();
    support.sort_unstable();
    Cochain::from_support(model, n, &support).expect("permuted support stays in range")
}

/// Everything `decide` consumes, after a random relabeling of every model.
pub struct Relabeled {
    pub nt: NormalOneType,
    pub cover: Option<DoubleCoverData>,
    pub lift: Option<Cochain>,
    pub section: Option<SectionDatum>,
}

pub fn relabel_fixture<R: Rng>(f: &Fixture, rng: &mut R) -> Relabeled {
    let base_perms = random_relabeling(&f.base, rng);
    let base = Arc::new(f.base.relabel(&base_perms).unwrap());
    let original = f.normal_type().expect("fixture is a normal 1-type");
    let nt = NormalOneType::new(
        base.clone(),
        relabel_cochain(&original.w1, &base, &base_perms),
        relabel_cochain(&original.w2, &base, &base_perms),
    )
    .with_assertions(original.assertions.clone());
    let (cover, lift) = match &f.cover {
        Some(c) => {
            let perms = random_relabeling(c.cover(), rng);
            let model = Arc::new(c.cover().relabel(&perms).unwrap());
            let involution = c.involution().relabel(model.clone(), &perms).unwrap();
            let projection = c.projection().relabel(model.clone(), &perms, base.clone(), &base_perms).unwrap();
            let data = DoubleCoverData::new(base.clone(), involution, projection).unwrap();
            let lift = f.lift_cochain().map(|a| relabel_cochain(a, &model, &perms));
            (Some(data), lift)
        }
        None => (None, None),
    };
    let section = f.section.as_deref().map(|name| {
        let map = &f.maps[name];
        let identity: Vec<Vec<usize>> =
            (0..=map.source().max_degree()).map(|n| (0..map.source().count(n)).collect()).collect();
        let moved = map.relabel(map.source().clone(), &identity, base.clone(), &base_perms).unwrap();
        SectionDatum::new(&nt, moved).unwrap()
    });
    Relabeled { nt, cover, lift, section }
}
