//! The acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that the lines are printed even
//! when every criterion passes.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use exotica_core::catalog::{fixture, Fixture, FIXTURE_NAMES};
use exotica_core::cohomology::{
    betti_numbers, class_normal_form, cohomology_basis, homology, is_coboundary, AbelianGroupInvariants,
    Coefficients, Twist,
};
use exotica_core::format::{export_fixture, LoadedModel};
use exotica_core::james::{d2_maps, e2_page, killers_report, Status};
use exotica_core::linalg::Subspace;
use exotica_core::obstruction::{
    decide, replay, restricted_image, secondary_witness, sq2_w, DecideConfig, DoubleCoverData, LiftDatum, Outcome,
};
use exotica_core::simplicial::{builders, product, Cochain, SimplicialModel};

type Check = Result<String, String>;

fn ensure(ok: bool, why: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why.into())
    }
}

/// Runs one criterion, prints its line, and reports whether it passed.
fn criterion(n: usize, title: &str, limit: Option<Duration>, body: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let elapsed = start.elapsed();
    let result = match (result, limit) {
        (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
        (r, _) => r,
    };
    let limit_note = limit.map_or(String::new(), |l| format!(", limit {l:?}"));
    match &result {
        Ok(detail) => println!("criterion {n} PASS  {title}: {detail} ({elapsed:.2?}{limit_note})"),
        Err(why) => println!("criterion {n} FAIL  {title}: {why} ({elapsed:.2?}{limit_note})"),
    }
    result.is_ok()
}

fn verdict_of(f: &Fixture) -> exotica_core::obstruction::Verdict {
    f.decide(&DecideConfig::default()).expect("fixture is a normal 1-type").expect("decide runs")
}

fn verdict_regressions() -> Check {
    let expected = [
        ("rp-w2-zero", Outcome::NoExoticaPrimary),
        ("rp-kreck", Outcome::ExoticaExistKreck),
        ("z2-remark", Outcome::ExoticaExistCd3),
        ("z4-semidirect", Outcome::NoExoticaSecondary),
    ];
    for (name, outcome) in expected {
        let f = fixture(name).map_err(|e| e.to_string())?;
        let v = verdict_of(&f);
        ensure(v.outcome == outcome, format!("{name}: got {:?}, expected {outcome:?}", v.outcome))?;
    }
    Ok("4 verdicts as expected".into())
}

fn classes(basis: &exotica_core::cohomology::CohomologyBasis, cochains: &[Cochain]) -> Subspace {
    let coords = cochains.iter().map(|c| basis.coordinates(c).unwrap());
    Subspace::from_spanning(basis.dim(), coords).unwrap()
}

fn same_subspace(a: &Subspace, b: &Subspace) -> bool {
    a.dim() == b.dim() && a.sum(b).unwrap().dim() == a.dim()
}

fn semidirect_internals() -> Check {
    let f = fixture("z4-semidirect").map_err(|e| e.to_string())?;
    let nt = f.normal_type().unwrap();
    let cover = f.cover.as_ref().unwrap();
    let t = |k: usize| f.cover_cochains[&format!("t{k}")].clone();
    let cup = |a: &Cochain, b: &Cochain| a.cup(b).unwrap();
    let sum = |a: &Cochain, b: &Cochain| a.add(b).unwrap();

    // Image of p* on H² against the expected basis.
    let expected = [
        cup(&t(1), &t(3)),
        cup(&t(2), &t(4)),
        sum(&cup(&t(1), &t(2)), &cup(&t(3), &t(4))),
        sum(&cup(&t(1), &t(4)), &cup(&t(2), &t(3))),
    ];
    let h2 = cohomology_basis(cover.cover(), 2).unwrap();
    let pulled: Vec<Cochain> =
        cohomology_basis(&nt.base, 2).unwrap().representatives().iter().map(|g| cover.pullback(g).unwrap()).collect();
    let image = classes(&h2, &pulled);
    let target = classes(&h2, &expected);
    ensure(target.dim() == 4, format!("expected classes span dimension {}", target.dim()))?;
    ensure(same_subspace(&image, &target), format!("Im p* has dimension {}, not the expected span", image.dim()))?;

    // A = a ∪ T*a is t1t2t3t4 and nonzero.
    let datum = LiftDatum::new(&nt, cover, f.lift_cochain().unwrap().clone()).map_err(|e| e.to_string())?;
    let witness = secondary_witness(cover, &datum).map_err(|e| e.to_string())?;
    let product4 = cup(&cup(&cup(&t(1), &t(2)), &t(3)), &t(4));
    ensure(is_coboundary(&sum(&witness, &product4)).unwrap(), "A is not cohomologous to t1t2t3t4")?;
    ensure(!is_coboundary(&product4).unwrap(), "t1t2t3t4 vanishes in H⁴")?;

    // p*Sq²_w vanishes on H², and p*w2 kills the image of p*.
    let restricted = restricted_image(&nt, cover).map_err(|e| e.to_string())?;
    ensure(restricted.normal_forms.is_zero(), "p*Sq²_w is nonzero on H²")?;
    for g in cohomology_basis(&nt.base, 2).unwrap().representatives() {
        let image = cover.pullback(&sq2_w(&nt, &g).unwrap()).unwrap();
        ensure(is_coboundary(&image).unwrap(), "a class p*Sq²_w(g) is not a coboundary")?;
    }
    let jw2 = cover.pullback(&nt.w2).unwrap();
    ensure(is_coboundary(&sum(&jw2, &expected[2])).unwrap(), "p*w2 is not t1t2 + t3t4")?;
    for e in &expected {
        ensure(is_coboundary(&cup(&jw2, e)).unwrap(), "p*w2 ∪ (image class) is nonzero")?;
        ensure(is_coboundary(&cup(e, e)).unwrap(), "an image class squares to nonzero")?;
    }
    ensure(!restricted.contains(&witness).unwrap(), "A lies in the restricted image")?;
    Ok(format!("Im p* = 4-dim expected span, A = t1t2t3t4 ≠ 0, p*Sq²_w = 0 on {} generators", restricted.generators.len()))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
}

fn steenrod_fixtures() -> Check {
    let rp = Arc::new(builders::bar_b_z2(6));
    let x = Cochain::from_support(&rp, 1, &[0]).unwrap();
    let mut powers = vec![Cochain::one(&rp), x.clone()];
    for k in 2..=6 {
        powers.push(powers[k - 1].cup(&x).unwrap());
    }
    for (k, p) in powers.iter().enumerate().skip(1) {
        ensure(!is_coboundary(p).unwrap(), format!("x^{k} vanishes"))?;
    }
    let scaled = |c: usize, d: usize| if c % 2 == 1 { powers[d].clone() } else { Cochain::zero(&rp, d).unwrap() };
    for k in 1..=4 {
        let sq1 = powers[k].sq(1).unwrap();
        let sq2 = powers[k].sq(2).unwrap();
        ensure(is_coboundary(&sq1.add(&scaled(k, k + 1)).unwrap()).unwrap(), format!("Sq¹(x^{k}) ≠ {k}·x^{}", k + 1))?;
        let c = binomial(k, 2);
        ensure(is_coboundary(&sq2.add(&scaled(c, k + 2)).unwrap()).unwrap(), format!("Sq²(x^{k}) ≠ {c}·x^{}", k + 2))?;
    }
    let u2 = &powers[2];
    let lhs = u2.sq(2).unwrap().add(&x.cup(&u2.sq(1).unwrap()).unwrap()).unwrap();
    ensure(is_coboundary(&lhs.add(&powers[4]).unwrap()).unwrap(), "(Sq² + u₁Sq¹)(u₁²) ≠ u₁⁴")?;
    Ok("Sq¹, Sq² on x^k for k ≤ 4 and (Sq²+u₁Sq¹)(u₁²) = u₁⁴".into())
}

/// The distinct models behind the catalog.
fn catalog_models() -> Vec<(String, Arc<SimplicialModel>)> {
    let mut out: Vec<(String, Arc<SimplicialModel>)> = Vec::new();
    for name in FIXTURE_NAMES {
        let f = fixture(name).unwrap();
        if !out.iter().any(|(_, m)| m.same_cells(&f.base)) {
            out.push((name.to_string(), f.base.clone()));
        }
        if let Some(c) = &f.cover {
            out.push((format!("{name} cover"), c.cover().clone()));
        }
    }
    out
}

/// `δ(u ∪_i v) = δu ∪_i v + u ∪_i δv + u ∪_{i-1} v + v ∪_{i-1} u`.
fn cup_i_contract(model: &Arc<SimplicialModel>, trials: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let top = model.max_degree();
    let mut done = 0;
    while done < trials {
        let p = rng.gen_range(0..top);
        let q = rng.gen_range(0..top);
        let i = rng.gen_range(0..=p.min(q));
        if p + q < i + 1 || p + q - i + 1 > top {
            continue;
        }
        let u = Cochain::random(model, p, rng).unwrap();
        let v = Cochain::random(model, q, rng).unwrap();
        let lhs = u.cup_i(&v, i).unwrap().coboundary().unwrap();
        let mut rhs = u.coboundary().unwrap().cup_i(&v, i).unwrap().add(&u.cup_i(&v.coboundary().unwrap(), i).unwrap()).unwrap();
        if i > 0 {
            rhs = rhs.add(&u.cup_i(&v, i - 1).unwrap()).unwrap().add(&v.cup_i(&u, i - 1).unwrap()).unwrap();
        }
        ensure(lhs == rhs, format!("contract fails for p={p}, q={q}, i={i}"))?;
        done += 1;
    }
    Ok(())
}

fn steenrod_and_contract() -> Check {
    let start = Instant::now();
    let detail = steenrod_fixtures()?;
    let fixtures_took = start.elapsed();
    ensure(fixtures_took <= Duration::from_secs(5), format!("projective fixtures took {fixtures_took:.2?}, limit 5s"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let models = catalog_models();
    for (name, model) in &models {
        cup_i_contract(model, 1000, &mut rng).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{detail} in {fixtures_took:.2?}; cup-i contract on {} models × 1000 trials", models.len()))
}

fn k2_stress() -> Check {
    let k = Arc::new(builders::k_z2_2(6));
    let betti = betti_numbers(&k);
    ensure(betti == [1, 0, 1, 1, 1, 2], format!("mod-2 ranks {betti:?}"))?;
    let h4 = homology(&k, 4, Coefficients::Integers, Twist::None, false).map_err(|e| e.to_string())?;
    ensure(h4 == AbelianGroupInvariants::cyclic(4), format!("H₄ = {h4}"))?;
    let iota = cohomology_basis(&k, 2).unwrap().representative(0);
    ensure(!is_coboundary(&iota.sq(1).unwrap()).unwrap(), "Sq¹ι₂ = 0")?;
    Ok(format!("ranks {betti:?}, H₄ = {h4}, Sq¹ι₂ ≠ 0"))
}

fn twisted_homology() -> Check {
    let rp = Arc::new(builders::bar_b_z2(6));
    let x = Cochain::from_support(&rp, 1, &[0]).unwrap();
    let h0 = homology(&rp, 0, Coefficients::TwistedIntegers, Twist::Local(&x), false).map_err(|e| e.to_string())?;
    ensure(h0 == AbelianGroupInvariants::cyclic(2), format!("H₀(ℤ/2; ℤ^w) = {h0}"))?;
    let h5 = homology(&rp, 5, Coefficients::TwistedIntegers, Twist::Local(&x), false).map_err(|e| e.to_string())?;
    ensure(h5.is_zero(), format!("H₅(ℝP; ℤ^-) = {h5}"))?;

    let e = Arc::new(builders::bar_e_z2(6));
    let cover = DoubleCoverData::quotient(builders::bar_e_z2_shift(&e).unwrap()).map_err(|e| e.to_string())?;
    let via_cover = Twist::Cover { cover: cover.cover(), lifts: cover.lifts(), orbit: cover.orbit() };
    for p in [0, 5] {
        let g = homology(cover.base(), p, Coefficients::TwistedIntegers, via_cover, false).map_err(|e| e.to_string())?;
        let expected = if p == 0 { AbelianGroupInvariants::cyclic(2) } else { AbelianGroupInvariants::zero() };
        ensure(g == expected, format!("through the cover, H_{p} = {g}"))?;
    }
    Ok(format!("H₀ = {h0}, H₅ = {h5}, both twists agree"))
}

fn james_report_checks() -> Check {
    let f = fixture("rp-w2-zero").unwrap();
    let nt = f.normal_type().unwrap();
    let page = e2_page(&nt, None).map_err(|e| e.to_string())?;
    let diffs = d2_maps(&nt, None).map_err(|e| e.to_string())?;
    ensure(page.get(2, 3).unwrap().group.is_zero(), "E²₂,₃ ≠ 0")?;
    ensure(page.get(5, 0).unwrap().group.is_zero(), "E²₅,₀ ≠ 0")?;
    ensure(diffs.get(4, 1).unwrap().is_isomorphism(), "d₂: E²₄,₁ -> E²₂,₂ is not an isomorphism")?;
    let killers = killers_report(&nt, &verdict_of(&f)).map_err(|e| e.to_string())?;
    ensure(killers.status(3) == Some(Status::Nonzero), "d₃ is not reported nonzero")?;

    let f = fixture("rp-kreck").unwrap();
    let nt = f.normal_type().unwrap();
    let killers = killers_report(&nt, &verdict_of(&f)).map_err(|e| e.to_string())?;
    ensure(killers.killers.iter().all(|k| k.status == Status::Zero), "a differential into E_{0,4} is not zero")?;
    ensure(killers.k3_survives == Some(true), "[K3] is not reported to survive")?;
    Ok("rp-w2-zero: E²₂,₃ = E²₅,₀ = 0, d₂(4,1) iso, d₃ ≠ 0; rp-kreck: d₂…d₅ into E_{0,4} vanish".into())
}

fn all_builders() -> Vec<(String, Arc<SimplicialModel>)> {
    let circle = Arc::new(builders::circle());
    let mut out: Vec<(String, Arc<SimplicialModel>)> = vec![
        ("B(Z/2)".into(), Arc::new(builders::bar_b_z2(6))),
        ("B(Z/3)".into(), Arc::new(builders::bar_b(&builders::GroupTable::cyclic(3), 4))),
        ("E(Z/2)".into(), Arc::new(builders::bar_e_z2(6))),
        ("K(Z/2,2)".into(), Arc::new(builders::k_z2_2(6))),
        ("point".into(), Arc::new(builders::point(4))),
        ("circle".into(), circle.clone()),
        ("circle double cover".into(), Arc::new(builders::circle_double_cover())),
        ("torus".into(), product(&circle, &circle, 6).unwrap().model),
    ];
    for n in 1..=4 {
        out.push((format!("Δ^{n}"), Arc::new(builders::standard_simplex(n))));
    }
    out.extend(catalog_models());
    out
}

fn perturbation_invariance(model: &Arc<SimplicialModel>, trials: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let top = model.max_degree();
    let mut checked = 0;
    for p in 1..top {
        let basis = cohomology_basis(model, p).unwrap();
        if basis.dim() == 0 {
            continue;
        }
        for _ in 0..trials {
            let coords: Vec<bool> = (0..basis.dim()).map(|_| rng.gen()).collect();
            let u = basis.class_of(&exotica_core::linalg::F2Vector::from_bits(&coords));
            let c = Cochain::random(model, p - 1, rng).unwrap();
            let moved = u.add(&c.coboundary().unwrap()).unwrap();
            for k in 1..=2 {
                if p + k > top {
                    continue;
                }
                let diff = u.sq(k).unwrap().add(&moved.sq(k).unwrap()).unwrap();
                ensure(class_normal_form(&diff).unwrap().is_zero(), format!("Sq^{k} depends on the representative in degree {p}"))?;
            }
            checked += 1;
        }
        return Ok(checked);
    }
    Ok(checked)
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let models = all_builders();
    for (name, m) in &models {
        let v = m.validate();
        ensure(v.is_empty(), format!("{name}: {} simplicial identity failures", v.len()))?;
        for k in 0..m.max_degree().saturating_sub(1) {
            let dd = m.coboundary(k + 1).unwrap().mul(m.coboundary(k).unwrap()).unwrap();
            ensure(dd.is_zero(), format!("{name}: δδ ≠ 0 out of degree {k}"))?;
        }
    }
    let mut perturbed = 0;
    for (name, m) in &models {
        perturbed += perturbation_invariance(m, 100, &mut rng).map_err(|e| format!("{name}: {e}"))?;
    }

    let mut verdicts = 0;
    for name in FIXTURE_NAMES {
        let f = fixture(name).unwrap();
        let exported = export_fixture(&f);
        let again = export_fixture(&fixture(name).unwrap());
        ensure(exported == again, format!("{name}: export is not deterministic"))?;
        let base = LoadedModel::parse(&exported.base).map_err(|e| e.to_string())?;
        ensure(base.to_canonical_string() == exported.base, format!("{name}: base file does not round-trip"))?;
        if let Some(text) = &exported.cover {
            let cover = LoadedModel::parse(text).map_err(|e| e.to_string())?;
            ensure(&cover.to_canonical_string() == text, format!("{name}: cover file does not round-trip"))?;
        }
        let Some(expected) = f.expected else { continue };
        let nt = f.normal_type().unwrap();
        let section = f.section_datum().unwrap();
        let v = verdict_of(&f);
        replay(&v, &nt, f.cover.as_ref(), f.lift_cochain(), section.as_ref()).map_err(|e| format!("{name}: replay: {e}"))?;
        verdicts += 1;
        for _ in 0..2 {
            let r = common::relabel_fixture(&f, &mut rng);
            let w = decide(&r.nt, r.cover.as_ref(), r.lift.as_ref(), r.section.as_ref(), &DecideConfig::default())
                .map_err(|e| e.to_string())?;
            ensure(w.outcome == expected, format!("{name}: relabeled verdict {:?}", w.outcome))?;
            replay(&w, &r.nt, r.cover.as_ref(), r.lift.as_ref(), r.section.as_ref())
                .map_err(|e| format!("{name} relabeled: replay: {e}"))?;
            verdicts += 1;
        }
    }
    Ok(format!(
        "{} models valid with δ² = 0, {perturbed} perturbation trials, {verdicts} verdicts replayed, relabel-invariant, {} fixtures round-trip",
        models.len(),
        FIXTURE_NAMES.len()
    ))
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "verdict regressions", Some(secs(10)), verdict_regressions),
        criterion(2, "ℤ⁴⋊ℤ/2 internals", None, semidirect_internals),
        criterion(3, "Steenrod fixtures and cup-i contract", None, steenrod_and_contract),
        criterion(4, "K(ℤ/2,2) stress", Some(secs(60)), k2_stress),
        criterion(5, "twisted homology", None, twisted_homology),
        criterion(6, "James report", None, james_report_checks),
        criterion(7, "property suites", None, property_suites),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
