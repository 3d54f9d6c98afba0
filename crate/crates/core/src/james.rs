//! Diagnostic E² page of the James spectral sequence
//! `E²_{p,q} = H_p(π; Ω_q^Spin) ⇒ Ω_{p+q}(ξ)` for `p + q ≤ 5`, its `d₂`
//! differentials, and which differential into `E_{0,4}` can kill the K3
//! class.
//!
//! Nothing here feeds back into the verdict. The statuses of `d₃`, `d₄`
//! and `d₅` are read off the obstruction pipeline, never computed from the
//! spectral sequence itself.

use serde::Serialize;

use crate::cohomology::{
    cohomology_basis, cohomology_basis_allow_truncated, homology, reduction_image, AbelianGroupInvariants,
    Coefficients, Twist,
};
use crate::linalg::F2Matrix;
use crate::obstruction::{
    primary_obstruction, sq2_w_operator, DoubleCoverData, NormalOneType, ObstructionError, Outcome, Verdict,
};

/// Highest total degree on the page.
pub const TOTAL_DEGREE: usize = 5;

/// `Ω_q^Spin` for `q ≤ 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpinCoefficient {
    pub q: usize,
    pub group: &'static str,
    /// Rows with a twisted ℤ use the `w₁`-twisted integers.
    pub twisted: bool,
    pub generator: &'static str,
}

pub const SPIN_COEFFICIENTS: [SpinCoefficient; 5] = [
    SpinCoefficient { q: 0, group: "Z", twisted: true, generator: "point" },
    SpinCoefficient { q: 1, group: "Z/2", twisted: false, generator: "circle, Lie framing" },
    SpinCoefficient { q: 2, group: "Z/2", twisted: false, generator: "torus, Lie framing" },
    SpinCoefficient { q: 3, group: "0", twisted: false, generator: "none" },
    SpinCoefficient { q: 4, group: "Z", twisted: true, generator: "16·signature" },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Entry {
    pub p: usize,
    pub q: usize,
    pub group: AbelianGroupInvariants,
    /// False when degree `p + 1` is not listed, so the group may be too large.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct E2Page {
    pub entries: Vec<E2Entry>,
    /// How the twisted rows were computed: `"cover"` or `"local"`.
    pub twist: &'static str,
    pub caveats: Vec<String>,
}

impl E2Page {
    pub fn get(&self, p: usize, q: usize) -> Option<&E2Entry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }
}

/// Twisted integral homology through the cover when given, through the
/// local sign rule otherwise.
fn twist_of<'a>(nt: &'a NormalOneType, cover: Option<&'a DoubleCoverData>) -> Twist<'a> {
    match cover {
        Some(c) => Twist::Cover { cover: c.cover(), lifts: c.lifts(), orbit: c.orbit() },
        None => Twist::Local(&nt.w1),
    }
}

fn check_cover(nt: &NormalOneType, cover: Option<&DoubleCoverData>) -> Result<(), ObstructionError> {
    if let Some(c) = cover {
        if !std::sync::Arc::ptr_eq(c.base(), &nt.base) {
            return Err(ObstructionError::InvalidCover("the cover lies over a different model".into()));
        }
        if !c.realizes(&nt.w1)? {
            return Err(ObstructionError::InvalidCover("the cover does not realize w1".into()));
        }
    }
    Ok(())
}

pub fn e2_page(nt: &NormalOneType, cover: Option<&DoubleCoverData>) -> Result<E2Page, ObstructionError> {
    check_cover(nt, cover)?;
    let top = nt.base.max_degree();
    let twist = twist_of(nt, cover);
    let mut entries = Vec::new();
    let mut caveats = Vec::new();
    for coefficient in SPIN_COEFFICIENTS {
        let q = coefficient.q;
        for p in 0..=TOTAL_DEGREE - q {
            let exact = p < top;
            let group = match q {
                3 => AbelianGroupInvariants::zero(),
                _ if p > top => {
                    caveats.push(format!("E2[{p},{q}]: the model stops at degree {top}; entry omitted"));
                    continue;
                }
                1 | 2 => homology(&nt.base, p, Coefficients::F2, Twist::None, true)?,
                _ => homology(&nt.base, p, Coefficients::TwistedIntegers, twist, true)?,
            };
            let exact = exact || q == 3;
            if !exact {
                caveats.push(format!(
                    "E2[{p},{q}] = {group} is an upper bound: cells of degree {} are not listed",
                    p + 1
                ));
            }
            let generator = (q == 4).then_some(coefficient.generator);
            entries.push(E2Entry { p, q, group, exact, generator });
        }
    }
    Ok(E2Page { entries, twist: if cover.is_some() { "cover" } else { "local" }, caveats })
}

/// One `d₂: E²_{p,q} -> E²_{p-2,q+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct D2Map {
    pub source: (usize, usize),
    pub target: (usize, usize),
    /// For `q = 0` the domain is the mod-2 reduction of the twisted
    /// integral group, a subspace of `H_p(π; ℤ/2)`.
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub rank: usize,
    /// Rows of the matrix as bit strings, in the bases dual to the
    /// cohomology bases.
    pub rows: Vec<String>,
    pub exact: bool,
    #[serde(skip)]
    pub matrix: F2Matrix,
}

impl D2Map {
    fn new(source: (usize, usize), matrix: F2Matrix, exact: bool) -> Self {
        let rows = (0..matrix.rows())
            .map(|i| (0..matrix.cols()).map(|j| if matrix.get(i, j) { '1' } else { '0' }).collect())
            .collect();
        D2Map {
            source,
            target: (source.0 - 2, source.1 + 1),
            domain_dim: matrix.cols(),
            codomain_dim: matrix.rows(),
            rank: matrix.rank(),
            rows,
            exact,
            matrix,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn is_isomorphism(&self) -> bool {
        self.domain_dim == self.codomain_dim && self.rank == self.domain_dim
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialReport {
    pub maps: Vec<D2Map>,
    pub caveats: Vec<String>,
}

impl DifferentialReport {
    pub fn get(&self, p: usize, q: usize) -> Option<&D2Map> {
        self.maps.iter().find(|m| m.source == (p, q))
    }
}

/// `d₂` out of `(p, 1)` is dual to `Sq²_w: H^{p-2} -> H^p`; out of `(p, 0)`
/// it is that dual composed with reduction mod 2.
pub fn d2_maps(nt: &NormalOneType, cover: Option<&DoubleCoverData>) -> Result<DifferentialReport, ObstructionError> {
    check_cover(nt, cover)?;
    let top = nt.base.max_degree();
    let twist = twist_of(nt, cover);
    let mut maps = Vec::new();
    let mut caveats = Vec::new();
    for p in 2..=TOTAL_DEGREE {
        if p > top {
            caveats.push(format!("d2 out of degree {p}: the model stops at degree {top}"));
            continue;
        }
        let exact = p < top;
        if !exact {
            caveats.push(format!("d2 out of degree {p} uses a truncated H^{p}"));
        }
        let sq = sq2_w_operator(nt, p - 2, true)?;
        let dual = sq.matrix.transpose();
        if p < TOTAL_DEGREE {
            maps.push(D2Map::new((p, 1), dual.clone(), exact));
        }
        let basis = if exact { cohomology_basis(&nt.base, p)? } else { cohomology_basis_allow_truncated(&nt.base, p)? };
        let reductions = reduction_image(&nt.base, p, twist, &basis)?;
        let inclusion = F2Matrix::from_columns(basis.dim(), reductions.basis());
        maps.push(D2Map::new((p, 0), dual.mul(&inclusion)?, exact));
    }
    maps.sort_by_key(|m| (m.source.1, m.source.0));
    Ok(DifferentialReport { maps, caveats })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Zero,
    Nonzero,
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Killer {
    /// `k` of `d_k: E^k_{k,5-k} -> E^k_{0,4}`.
    pub page: usize,
    pub status: Status,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct KillersReport {
    pub clause: &'static str,
    pub killers: Vec<Killer>,
    /// Whether the K3 class survives to `E^∞`, when the verdict says.
    pub k3_survives: Option<bool>,
    pub summary: String,
}

impl KillersReport {
    pub fn status(&self, page: usize) -> Option<Status> {
        self.killers.iter().find(|k| k.page == page).map(|k| k.status)
    }
}

/// Reads the fate of the K3 class off the verdict. `d₂` into `E_{0,4}`
/// starts at `E_{2,3} = 0`; `d₃` is dual to `w₁³ + w₁w₂`; `d₄` is dual to
/// the secondary obstruction.
pub fn killers_report(nt: &NormalOneType, verdict: &Verdict) -> Result<KillersReport, ObstructionError> {
    if verdict.outcome == Outcome::InvalidInput {
        return Err(ObstructionError::InvalidInput(verdict.summary.clone()));
    }
    let k = |page, status, reason: &str| Killer { page, status, reason: reason.to_string() };
    let d2 = k(2, Status::Zero, "source E2[2,3] vanishes");
    let primary_nonzero = !primary_obstruction(nt)?.is_zero();
    let d3 = if primary_nonzero {
        k(3, Status::Nonzero, "dual to w1^3 + w1w2, which is nonzero")
    } else {
        k(3, Status::Zero, "dual to w1^3 + w1w2, which vanishes")
    };
    let killed = "target E_{0,4} is already zero on this page";
    let (d4, d5, survives) = match verdict.outcome {
        Outcome::NoExoticaPrimary => (k(4, Status::Zero, killed), k(5, Status::Zero, killed), Some(false)),
        Outcome::ExoticaExistKreck => {
            let why = "w2 + w1^2 is a coboundary, so [K3] survives";
            (k(4, Status::Zero, why), k(5, Status::Zero, why), Some(true))
        }
        Outcome::ExoticaExistCd3 => {
            let why = "sources in degrees above 3 vanish when cd <= 3";
            (k(4, Status::Zero, why), k(5, Status::Zero, why), Some(true))
        }
        Outcome::NoExoticaSecondary => {
            let cells = verdict.evidence.lift.as_ref().map_or(0, |l| l.witness.len());
            let why = format!("dual to the secondary obstruction; witness a∪T*a on {cells} cover 4-cells");
            (k(4, Status::Nonzero, &why), k(5, Status::Zero, killed), Some(false))
        }
        Outcome::ExoticaExistSecondary => {
            let why = "secondary obstruction vanishes and H5 = 0, so [K3] survives";
            (k(4, Status::Zero, why), k(5, Status::Zero, why), Some(true))
        }
        Outcome::Undetermined | Outcome::InvalidInput => {
            let why = "not settled by the obstructions computed";
            (k(4, Status::Open, why), k(5, Status::Open, why), None)
        }
    };
    let killers = vec![d2, d3, d4, d5];
    let summary = match survives {
        Some(true) => "all differentials into E_{0,4} vanish; [K3] survives".to_string(),
        Some(false) => {
            let by = killers.iter().find(|x| x.status == Status::Nonzero).map_or(0, |x| x.page);
            format!("[K3] is killed by d{by}")
        }
        None => "the fate of [K3] is open".to_string(),
    };
    Ok(KillersReport { clause: verdict.clause, killers, k3_survives: survives, summary })
}

/// Page, differentials and killers together.
#[derive(Clone, Debug, Serialize)]
pub struct JamesReport {
    pub coefficients: [SpinCoefficient; 5],
    pub page: E2Page,
    pub differentials: DifferentialReport,
    pub killers: KillersReport,
}

pub fn james_report(
    nt: &NormalOneType,
    cover: Option<&DoubleCoverData>,
    verdict: &Verdict,
) -> Result<JamesReport, ObstructionError> {
    Ok(JamesReport {
        coefficients: SPIN_COEFFICIENTS,
        page: e2_page(nt, cover)?,
        differentials: d2_maps(nt, cover)?,
        killers: killers_report(nt, verdict)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fixture;
    use crate::obstruction::DecideConfig;

    fn page_of(name: &str) -> (NormalOneType, E2Page, DifferentialReport) {
        let f = fixture(name).unwrap();
        let nt = f.normal_type().unwrap();
        let page = e2_page(&nt, f.cover.as_ref()).unwrap();
        let diffs = d2_maps(&nt, f.cover.as_ref()).unwrap();
        (nt, page, diffs)
    }

    #[test]
    fn projective_page_with_w2_zero() {
        let (_, page, diffs) = page_of("rp-w2-zero");
        assert!(page.get(2, 3).unwrap().group.is_zero());
        assert!(page.get(5, 0).unwrap().group.is_zero());
        assert_eq!(page.get(0, 4).unwrap().group, AbelianGroupInvariants::cyclic(2));
        assert!(page.caveats.is_empty());
        assert!(diffs.get(4, 1).unwrap().is_isomorphism());
    }

    #[test]
    fn projective_page_with_w2_square() {
        let (_, _, diffs) = page_of("rp-kreck");
        assert!(diffs.get(4, 1).unwrap().is_zero());
    }

    #[test]
    fn d2_from_21_is_multiplication_by_w2() {
        for (name, nonzero) in [("rp-w2-zero", false), ("rp-kreck", true)] {
            let (_, _, diffs) = page_of(name);
            let m = diffs.get(2, 1).unwrap();
            assert_eq!(m.codomain_dim, 1);
            assert_eq!(!m.is_zero(), nonzero, "{name}");
        }
    }

    #[test]
    fn torus_has_z2_in_the_signature_corner() {
        let (_, page, _) = page_of("z2-remark");
        assert_eq!(page.get(0, 4).unwrap().group, AbelianGroupInvariants::cyclic(2));
        assert_eq!(page.get(0, 4).unwrap().generator, Some("16·signature"));
        for p in 0..=2 {
            assert!(page.get(p, 3).unwrap().group.is_zero());
        }
    }

    #[test]
    fn killers_follow_the_verdict() {
        for (name, d3, survives) in [
            ("rp-w2-zero", Status::Nonzero, Some(false)),
            ("rp-kreck", Status::Zero, Some(true)),
            ("z2-remark", Status::Zero, Some(true)),
        ] {
            let f = fixture(name).unwrap();
            let nt = f.normal_type().unwrap();
            let v = f.decide(&DecideConfig::default()).unwrap().unwrap();
            let r = killers_report(&nt, &v).unwrap();
            assert_eq!(r.status(3), Some(d3), "{name}");
            assert_eq!(r.k3_survives, survives, "{name}");
        }
    }

    #[test]
    fn semidirect_product_is_killed_by_d4() {
        let f = fixture("z4-semidirect").unwrap();
        let nt = f.normal_type().unwrap();
        let v = f.decide(&DecideConfig::default()).unwrap().unwrap();
        let r = james_report(&nt, f.cover.as_ref(), &v).unwrap();
        assert_eq!(r.killers.status(3), Some(Status::Zero));
        assert_eq!(r.killers.status(4), Some(Status::Nonzero));
        assert_eq!(r.killers.k3_survives, Some(false));
        assert!(!r.page.get(5, 0).unwrap().exact);
    }

    #[test]
    fn consecutive_d2_compose_to_zero() {
        for name in ["rp-w2-zero", "rp-kreck", "z2-remark", "z4-semidirect"] {
            let (_, _, diffs) = page_of(name);
            for p in 4..=5 {
                let (Some(first), Some(second)) = (diffs.get(p, 0), diffs.get(p - 2, 1)) else { continue };
                assert!(second.matrix.mul(&first.matrix).unwrap().is_zero(), "{name} at {p}");
            }
        }
    }
}
