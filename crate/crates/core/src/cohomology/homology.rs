//! Integral homology of models, optionally twisted by the sign
//! representation of a double cover.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::linalg::{reduce_mod2, F2Vector, SparseZMatrix};
use crate::simplicial::{Cochain, SimplicialModel};

use super::{CohomologyBasis, CohomologyError};

/// Coefficients for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coefficients {
    Integers,
    TwistedIntegers,
    F2,
}

/// How the sign twist of `ℤ^{w}` enters the boundary.
#[derive(Clone, Copy)]
pub enum Twist<'a> {
    /// Untwisted boundary `Σ (-1)^i d_i`.
    None,
    /// `(-1)^{w(σ|01)} d_0 σ + Σ_{i≥1} (-1)^i d_i σ`, transporting the
    /// coefficient at vertex 0 along the first edge.
    Local(&'a Cochain),
    /// Chains of the cover tensored with the sign representation, in the
    /// basis of preferred lifts: a face landing on sheet 1 picks up `-1`.
    Cover {
        cover: &'a SimplicialModel,
        lifts: &'a [Vec<usize>],
        orbit: &'a [Vec<usize>],
    },
}

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k`, with
/// `1 < d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl AbelianGroupInvariants {
    pub fn zero() -> Self {
        AbelianGroupInvariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn cyclic(order: u64) -> Self {
        AbelianGroupInvariants { free_rank: 0, torsion: vec![BigUint::from(order)] }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupInvariants { free_rank: rank, torsion: Vec::new() }
    }

    /// Invariants of `ker ∂_p / im ∂_{p+1}` from the two boundary maps.
    pub fn from_boundaries(cells: usize, rank_out: usize, into: &[BigUint]) -> Self {
        AbelianGroupInvariants {
            free_rank: cells - rank_out - into.len(),
            torsion: into.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroupInvariants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AbelianGroupInvariants", 3)?;
        st.serialize_field("display", &self.to_string())?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// `∂_p : C_p -> C_{p-1}`; rows are `(p-1)`-cells.
pub fn boundary_matrix(model: &SimplicialModel, p: usize, twist: Twist<'_>) -> SparseZMatrix {
    match twist {
        Twist::None => plain_boundary(model, p),
        Twist::Local(w) => local_twisted_boundary(model, p, w),
        Twist::Cover { cover, lifts, orbit } => cover_twisted_boundary(cover, lifts, orbit, p),
    }
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn plain_boundary(model: &SimplicialModel, p: usize) -> SparseZMatrix {
    let mut m = SparseZMatrix::new(if p == 0 { 0 } else { model.count(p - 1) }, model.count(p));
    if p == 0 {
        return m;
    }
    for cell in 0..model.count(p) {
        for (i, t) in model.faces_of(p, cell).iter().enumerate() {
            if let Some(f) = t.nondegenerate() {
                m.add(f, cell, sign(i));
            }
        }
    }
    m
}

pub fn local_twisted_boundary(model: &SimplicialModel, p: usize, w: &Cochain) -> SparseZMatrix {
    let mut m = SparseZMatrix::new(if p == 0 { 0 } else { model.count(p - 1) }, model.count(p));
    if p == 0 {
        return m;
    }
    for cell in 0..model.count(p) {
        let first_edge = model.face_by_mask(p, cell, 0b11);
        let flip = first_edge.nondegenerate().is_some_and(|e| w.at(e));
        for (i, t) in model.faces_of(p, cell).iter().enumerate() {
            if let Some(f) = t.nondegenerate() {
                let s = if i == 0 && flip { -1 } else { sign(i) };
                m.add(f, cell, s);
            }
        }
    }
    m
}

pub fn cover_twisted_boundary(
    cover: &SimplicialModel,
    lifts: &[Vec<usize>],
    orbit: &[Vec<usize>],
    p: usize,
) -> SparseZMatrix {
    let rows = if p == 0 { 0 } else { lifts[p - 1].len() };
    let mut m = SparseZMatrix::new(rows, lifts[p].len());
    if p == 0 {
        return m;
    }
    for (o, &lift) in lifts[p].iter().enumerate() {
        for (i, t) in cover.faces_of(p, lift).iter().enumerate() {
            if let Some(f) = t.nondegenerate() {
                let target = orbit[p - 1][f];
                let on_sheet_one = lifts[p - 1][target] != f;
                let s = if on_sheet_one { -sign(i) } else { sign(i) };
                m.add(target, o, s);
            }
        }
    }
    m
}

/// `H_p` of a model. The answer is exact only when cells of degree
/// `p + 1` are listed; otherwise `allow_truncated` must be set and the
/// result may be too large.
pub fn homology(
    model: &SimplicialModel,
    p: usize,
    coefficients: Coefficients,
    twist: Twist<'_>,
    allow_truncated: bool,
) -> Result<AbelianGroupInvariants, CohomologyError> {
    let top = model.max_degree();
    if p > top || (p + 1 > top && !allow_truncated) {
        return Err(CohomologyError::Truncated { degree: p, needed: p + 1, max: top });
    }
    let twist = match coefficients {
        Coefficients::Integers | Coefficients::F2 => Twist::None,
        Coefficients::TwistedIntegers => twist,
    };
    let n = model.count(p);
    if coefficients == Coefficients::F2 {
        let rank_out = if p == 0 { 0 } else { model.coboundary(p - 1)?.rank() };
        let rank_in = if p + 1 > top { 0 } else { model.coboundary(p)?.rank() };
        let dim = n - rank_out - rank_in;
        return Ok(AbelianGroupInvariants { free_rank: 0, torsion: vec![BigUint::from(2u32); dim] });
    }
    let out = boundary_matrix(model, p, twist);
    let rank_out = out.rank();
    let into = if p + 1 > top {
        Vec::new()
    } else {
        boundary_matrix(model, p + 1, twist).invariant_factors()
    };
    Ok(AbelianGroupInvariants::from_boundaries(n, rank_out, &into))
}

/// Image of `H_p(X; ℤ^{w}) -> H_p(X; ℤ/2)`, written in the basis of
/// `H_p(X; ℤ/2)` dual to the cocycle basis of `H^p`. Reductions of a
/// ℤ-basis of the integral cycles span it.
pub fn reduction_image(
    model: &SimplicialModel,
    p: usize,
    twist: Twist<'_>,
    cohomology: &CohomologyBasis,
) -> Result<crate::linalg::Subspace, CohomologyError> {
    let reps: Vec<F2Vector> = cohomology.representatives().into_iter().map(Cochain::into_values).collect();
    let n = model.count(p);
    let cycles = boundary_matrix(model, p, twist).kernel_basis();
    let pairings = cycles.iter().map(|z| {
        let z2 = reduce_mod2(n, z);
        F2Vector::from_bits(&reps.iter().map(|h| h.dot(&z2)).collect::<Vec<_>>())
    });
    Ok(crate::linalg::Subspace::from_spanning(reps.len(), pairings)?)
}
