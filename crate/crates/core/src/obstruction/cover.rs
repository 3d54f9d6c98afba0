//! Double covers `p: X̃ -> X` with their deck involution.

use std::sync::Arc;

use crate::linalg::F2Vector;
use crate::simplicial::{
    quotient_free_involution, Cochain, FreeInvolution, OrbitQuotient, SimplicialError, SimplicialMap,
    SimplicialModel,
};

use super::ObstructionError;

/// A connected double cover, checked on construction: `p` is simplicial,
/// sends cells to cells of the same degree, and its fibers are exactly the
/// orbits `{c, Tc}`.
#[derive(Clone, Debug)]
pub struct DoubleCoverData {
    base: Arc<SimplicialModel>,
    cover: Arc<SimplicialModel>,
    involution: FreeInvolution,
    projection: SimplicialMap,
    lifts: Vec<Vec<usize>>,
    orbit: Vec<Vec<usize>>,
    characteristic: Cochain,
}

fn invalid(why: impl Into<String>) -> ObstructionError {
    ObstructionError::InvalidCover(why.into())
}

impl DoubleCoverData {
    pub fn new(
        base: Arc<SimplicialModel>,
        involution: FreeInvolution,
        projection: SimplicialMap,
    ) -> Result<Self, ObstructionError> {
        let cover = involution.model().clone();
        if !Arc::ptr_eq(projection.source(), &cover) || !Arc::ptr_eq(projection.target(), &base) {
            return Err(SimplicialError::ModelMismatch.into());
        }
        if cover.max_degree() != base.max_degree() {
            return Err(invalid(format!(
                "cover stops at degree {}, base at {}",
                cover.max_degree(),
                base.max_degree()
            )));
        }
        if let Some((n, c, i)) = projection.violations().first() {
            return Err(invalid(format!("projection does not commute with d{i} on cell {c} of degree {n}")));
        }
        let mut lifts = Vec::with_capacity(base.max_degree() + 1);
        let mut orbit = Vec::with_capacity(base.max_degree() + 1);
        for n in 0..=base.max_degree() {
            if cover.count(n) != 2 * base.count(n) {
                return Err(invalid(format!(
                    "degree {n}: {} cover cells over {} base cells",
                    cover.count(n),
                    base.count(n)
                )));
            }
            let mut l = vec![usize::MAX; base.count(n)];
            let mut o = vec![0; cover.count(n)];
            for c in 0..cover.count(n) {
                let below = projection.image(n, c).nondegenerate().ok_or_else(|| {
                    invalid(format!("projection collapses cell {c} of degree {n}"))
                })?;
                if projection.image(n, involution.image(n, c)) != projection.image(n, c) {
                    return Err(invalid(format!("projection separates cell {c} of degree {n} from its translate")));
                }
                o[c] = below;
                l[below] = l[below].min(c);
            }
            for (b, &lift) in l.iter().enumerate() {
                if lift == usize::MAX {
                    return Err(invalid(format!("base cell {b} of degree {n} has no preimage")));
                }
            }
            lifts.push(l);
            orbit.push(o);
        }
        let sheet = |n: usize, c: usize| lifts[n][orbit[n][c]] != c;
        let mut w = F2Vector::zeros(base.count(1));
        for (e, &lift) in lifts[1].iter().enumerate() {
            let d0 = cover.face(1, lift, 0).cell;
            let d1 = cover.face(1, lift, 1).cell;
            w.set(e, sheet(0, d0) != sheet(0, d1));
        }
        let characteristic = Cochain::new(base.clone(), 1, w)?;
        if base.coboundary_space(1)?.contains(characteristic.values())? {
            return Err(SimplicialError::TrivialCover.into());
        }
        Ok(DoubleCoverData { base, cover, involution, projection, lifts, orbit, characteristic })
    }

    /// The cover of a quotient built by [`quotient_free_involution`].
    pub fn from_quotient(quotient: OrbitQuotient, involution: FreeInvolution) -> Result<Self, ObstructionError> {
        Self::new(quotient.base, involution, quotient.projection)
    }

    /// Forms the quotient of `cover` by `involution` and wraps it.
    pub fn quotient(involution: FreeInvolution) -> Result<Self, ObstructionError> {
        let q = quotient_free_involution(involution.model(), &involution)?;
        Self::from_quotient(q, involution)
    }

    pub fn base(&self) -> &Arc<SimplicialModel> {
        &self.base
    }

    pub fn cover(&self) -> &Arc<SimplicialModel> {
        &self.cover
    }

    pub fn involution(&self) -> &FreeInvolution {
        &self.involution
    }

    pub fn projection(&self) -> &SimplicialMap {
        &self.projection
    }

    /// `lifts[n][o]`: the smaller cover cell over base cell `o`.
    pub fn lifts(&self) -> &[Vec<usize>] {
        &self.lifts
    }

    /// `orbit[n][c]`: the base cell under cover cell `c`.
    pub fn orbit(&self) -> &[Vec<usize>] {
        &self.orbit
    }

    /// 1 on base edges whose preferred lift changes sheet.
    pub fn characteristic(&self) -> &Cochain {
        &self.characteristic
    }

    pub fn sheet(&self, n: usize, cell: usize) -> bool {
        self.lifts[n][self.orbit[n][cell]] != cell
    }

    /// Whether `w1` is cohomologous to the characteristic cocycle.
    pub fn realizes(&self, w1: &Cochain) -> Result<bool, ObstructionError> {
        let sum = self.characteristic.add(w1)?;
        Ok(self.base.coboundary_space(1)?.contains(sum.values())?)
    }

    /// `p^# u`.
    pub fn pullback(&self, u: &Cochain) -> Result<Cochain, ObstructionError> {
        Ok(self.projection.pullback(u)?)
    }

    /// Transfer `tr(c)(o) = c(õ) + c(Tõ)`; a cochain map with
    /// `p^# tr(c) = c + T^# c`.
    pub fn transfer(&self, c: &Cochain) -> Result<Cochain, ObstructionError> {
        if !Arc::ptr_eq(c.model(), &self.cover) {
            return Err(SimplicialError::ModelMismatch.into());
        }
        let n = c.degree();
        let mut values = F2Vector::zeros(self.base.count(n));
        for (o, &lift) in self.lifts[n].iter().enumerate() {
            values.set(o, c.at(lift) != c.at(self.involution.image(n, lift)));
        }
        Ok(Cochain::new(self.base.clone(), n, values)?)
    }
}
