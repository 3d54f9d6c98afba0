//! Quotients by free involutions.
//!
//! Base cells are orbits `{c, Tc}`, ordered by their smaller member, which is
//! the orbit's preferred lift ("sheet 0"). Faces of a base cell are the
//! orbits of the faces of its preferred lift.

use std::sync::Arc;

use crate::linalg::F2Vector;

use super::operator::Target;
use super::{Cochain, FreeInvolution, SimplicialError, SimplicialMap, SimplicialModel};

/// The orbit space of a free involution with its bookkeeping.
#[derive(Clone, Debug)]
pub struct OrbitQuotient {
    pub base: Arc<SimplicialModel>,
    pub projection: SimplicialMap,
    /// `lifts[n][o]`: the sheet-0 lift of base cell `o`.
    pub lifts: Vec<Vec<usize>>,
    /// `orbit[n][c]`: base cell under cover cell `c`.
    pub orbit: Vec<Vec<usize>>,
    /// Characteristic cocycle: 1 on edges whose sheet-0 lift joins
    /// different sheets.
    pub w1: Cochain,
}

impl OrbitQuotient {
    /// 0 for preferred lifts, 1 for their translates.
    pub fn sheet(&self, n: usize, cell: usize) -> bool {
        self.lifts[n][self.orbit[n][cell]] != cell
    }
}

/// Forms the quotient without asking whether the cover is connected.
pub fn orbit_quotient(cover: &Arc<SimplicialModel>, t: &FreeInvolution) -> Result<OrbitQuotient, SimplicialError> {
    if !Arc::ptr_eq(cover, t.model()) {
        return Err(SimplicialError::ModelMismatch);
    }
    let top = cover.max_degree();
    let mut lifts = Vec::with_capacity(top + 1);
    let mut orbit = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut l = Vec::new();
        let mut o = vec![usize::MAX; cover.count(n)];
        for c in 0..cover.count(n) {
            let partner = t.image(n, c);
            if c < partner {
                o[c] = l.len();
                o[partner] = l.len();
                l.push(c);
            }
        }
        lifts.push(l);
        orbit.push(o);
    }
    let mut faces = vec![Vec::new()];
    for n in 1..=top {
        let mut f = Vec::with_capacity(lifts[n].len() * (n + 1));
        for &c in &lifts[n] {
            for t in cover.faces_of(n, c) {
                let dim = n - 1 - t.degen.len();
                f.push(Target::new(t.degen, orbit[dim][t.cell]));
            }
        }
        faces.push(f);
    }
    let counts = lifts.iter().map(Vec::len).collect();
    let base = Arc::new(SimplicialModel::new(top, counts, faces)?);
    let assignment = orbit.iter().map(|row| row.iter().map(|&o| Target::cell(o)).collect()).collect();
    let projection = SimplicialMap::new_unchecked(cover.clone(), base.clone(), assignment)?;

    let sheet = |n: usize, c: usize| lifts[n][orbit[n][c]] != c;
    let mut w1 = F2Vector::zeros(base.count(1));
    for (e, &lift) in lifts[1].iter().enumerate() {
        let d0 = cover.face(1, lift, 0).cell;
        let d1 = cover.face(1, lift, 1).cell;
        if sheet(0, d0) != sheet(0, d1) {
            w1.set(e, true);
        }
    }
    let w1 = Cochain::new(base.clone(), 1, w1)?;
    Ok(OrbitQuotient { base, projection, lifts, orbit, w1 })
}

/// The quotient of a connected double cover. A cover whose characteristic
/// class vanishes is trivial and is rejected.
pub fn quotient_free_involution(
    cover: &Arc<SimplicialModel>,
    t: &FreeInvolution,
) -> Result<OrbitQuotient, SimplicialError> {
    let q = orbit_quotient(cover, t)?;
    if q.base.coboundary_space(1)?.contains(q.w1.values()).expect("lengths agree") {
        return Err(SimplicialError::TrivialCover);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders;

    #[test]
    fn free_contractible_quotient_is_projective_space() {
        let e = Arc::new(builders::bar_e_z2(6));
        let t = builders::bar_e_z2_shift(&e).unwrap();
        let q = quotient_free_involution(&e, &t).unwrap();
        assert!(q.base.same_cells(&builders::bar_b_z2(6)));
        assert_eq!(q.w1.support(), vec![0]);
        assert!(q.projection.violations().is_empty());
    }

    #[test]
    fn characteristic_cocycle_pulls_back_to_a_coboundary() {
        let e = Arc::new(builders::bar_e_z2(4));
        let t = builders::bar_e_z2_shift(&e).unwrap();
        let q = quotient_free_involution(&e, &t).unwrap();
        let pulled = q.projection.pullback(&q.w1).unwrap();
        let sheets: Vec<usize> = (0..e.count(0)).filter(|&c| q.sheet(0, c)).collect();
        let s = Cochain::from_support(&e, 0, &sheets).unwrap();
        assert_eq!(s.coboundary().unwrap(), pulled);
    }

    #[test]
    fn trivial_cover_is_rejected() {
        let (m, t) = builders::disjoint_double(&builders::bar_b_z2(3));
        let t = t.unwrap();
        assert!(matches!(quotient_free_involution(&m, &t), Err(SimplicialError::TrivialCover)));
        let q = orbit_quotient(&m, &t).unwrap();
        assert!(q.base.same_cells(&builders::bar_b_z2(3)));
    }

    #[test]
    fn loop_double_cover_quotient_is_the_circle() {
        let s = Arc::new(builders::circle_double_cover());
        let t = builders::circle_rotation(&s).unwrap();
        let q = quotient_free_involution(&s, &t).unwrap();
        assert!(q.base.same_cells(&builders::circle()));
    }
}
