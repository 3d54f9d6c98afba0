//! Normalized mod-2 cochains and their products.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::linalg::F2Vector;

use super::operator::subsets;
use super::{SimplicialError, SimplicialModel};

/// A normalized cochain: values on nondegenerate cells of one degree.
/// Degenerate simplices evaluate to zero.
#[derive(Clone)]
pub struct Cochain {
    model: Arc<SimplicialModel>,
    degree: usize,
    values: F2Vector,
}

impl Cochain {
    pub fn new(model: Arc<SimplicialModel>, degree: usize, values: F2Vector) -> Result<Self, SimplicialError> {
        if degree > model.max_degree() {
            return Err(SimplicialError::DegreeOutOfRange { degree, max: model.max_degree() });
        }
        if values.len() != model.count(degree) {
            return Err(SimplicialError::BadStructure(format!(
                "cochain of degree {degree} needs {} values, got {}",
                model.count(degree),
                values.len()
            )));
        }
        Ok(Cochain { model, degree, values })
    }

    pub fn zero(model: &Arc<SimplicialModel>, degree: usize) -> Result<Self, SimplicialError> {
        Self::new(model.clone(), degree, F2Vector::zeros(model.count(degree)))
    }

    pub fn from_support(
        model: &Arc<SimplicialModel>,
        degree: usize,
        support: &[usize],
    ) -> Result<Self, SimplicialError> {
        let n = model.count(degree);
        if let Some(&bad) = support.iter().find(|&&c| c >= n) {
            return Err(SimplicialError::BadStructure(format!(
                "support index {bad} out of range for degree {degree} ({n} cells)"
            )));
        }
        Self::new(model.clone(), degree, F2Vector::from_support(n, support))
    }

    /// The constant cochain 1 in degree 0.
    pub fn one(model: &Arc<SimplicialModel>) -> Self {
        let n = model.count(0);
        Self::new(model.clone(), 0, F2Vector::from_support(n, &(0..n).collect::<Vec<_>>()))
            .expect("degree 0 always exists")
    }

    pub fn random<R: Rng>(model: &Arc<SimplicialModel>, degree: usize, rng: &mut R) -> Result<Self, SimplicialError> {
        let n = model.count(degree);
        let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        Self::new(model.clone(), degree, F2Vector::from_bits(&bits))
    }

    pub fn model(&self) -> &Arc<SimplicialModel> {
        &self.model
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &F2Vector {
        &self.values
    }

    pub fn into_values(self) -> F2Vector {
        self.values
    }

    pub fn support(&self) -> Vec<usize> {
        self.values.support()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    #[inline]
    pub fn at(&self, cell: usize) -> bool {
        self.values.get(cell)
    }

    pub(crate) fn same_model(&self, other: &Cochain) -> Result<(), SimplicialError> {
        if Arc::ptr_eq(&self.model, &other.model) {
            Ok(())
        } else {
            Err(SimplicialError::ModelMismatch)
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, SimplicialError> {
        self.same_model(other)?;
        if self.degree != other.degree {
            return Err(SimplicialError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        Ok(Cochain { model: self.model.clone(), degree: self.degree, values: self.values.xor(&other.values) })
    }

    pub fn coboundary(&self) -> Result<Cochain, SimplicialError> {
        let d = self.model.coboundary(self.degree)?;
        let values = d.mul_vec(&self.values).expect("coboundary matrix matches cochain length");
        Ok(Cochain { model: self.model.clone(), degree: self.degree + 1, values })
    }

    /// Closed in the truncation; top-degree cochains count as closed.
    pub fn is_closed(&self) -> bool {
        self.degree == self.model.max_degree() || self.coboundary().is_ok_and(|d| d.is_zero())
    }

    /// Alexander–Whitney product.
    pub fn cup(&self, other: &Cochain) -> Result<Cochain, SimplicialError> {
        self.cup_i(other, 0)
    }

    /// The cup-`i` product, of degree `p + q - i`.
    ///
    /// For `n = p + q - i` the value on an `n`-simplex sums, over subsets
    /// `U ⊂ [n]` of size `n - i`, the product `u(face off U⁰) · v(face off U¹)`,
    /// where `u_j ∈ U` (1-indexed, ascending) lies in `U⁰` iff `u_j ≡ j mod 2`,
    /// and only subsets with `|U⁰| = n - p` contribute. At `i = 0` this is the
    /// Alexander–Whitney product.
    pub fn cup_i(&self, other: &Cochain, i: usize) -> Result<Cochain, SimplicialError> {
        self.same_model(other)?;
        let (p, q) = (self.degree, other.degree);
        let model = &self.model;
        if i > p + q {
            return Err(SimplicialError::DegreeOutOfRange { degree: 0, max: model.max_degree() });
        }
        let n = p + q - i;
        if n > model.max_degree() {
            return Err(SimplicialError::DegreeOutOfRange { degree: n, max: model.max_degree() });
        }
        let mut values = F2Vector::zeros(model.count(n));
        if i > p.min(q) || self.is_zero() || other.is_zero() {
            return Ok(Cochain { model: model.clone(), degree: n, values });
        }
        let terms = cup_i_terms(n, p, i);
        for cell in 0..model.count(n) {
            let mut acc = false;
            for &(mu, mv) in terms {
                let fu = model.face_by_mask(n, cell, mu);
                if fu.is_degenerate() || !self.at(fu.cell) {
                    continue;
                }
                let fv = model.face_by_mask(n, cell, mv);
                if !fv.is_degenerate() && other.at(fv.cell) {
                    acc = !acc;
                }
            }
            if acc {
                values.set(cell, true);
            }
        }
        Ok(Cochain { model: model.clone(), degree: n, values })
    }

    /// `Sq^k u = u ∪_{p-k} u` for a closed `p`-cochain `u`.
    pub fn sq(&self, k: usize) -> Result<Cochain, SimplicialError> {
        if k > self.degree {
            return Cochain::zero(&self.model, self.degree + k);
        }
        if !self.is_closed() {
            return Err(SimplicialError::NotClosed { degree: self.degree });
        }
        self.cup_i(self, self.degree - k)
    }

    /// Rebinds to another model with identical cells, for cochains read
    /// from separately constructed copies.
    pub fn rebind(&self, model: &Arc<SimplicialModel>) -> Result<Cochain, SimplicialError> {
        if !model.same_cells(&self.model) {
            return Err(SimplicialError::ModelMismatch);
        }
        Cochain::new(model.clone(), self.degree, self.values.clone())
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(deg {}, support {:?})", self.degree, self.support())
    }
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.model, &other.model) && self.degree == other.degree && self.values == other.values
    }
}

impl Eq for Cochain {}

/// Face masks `(mask for u, mask for v)` contributing to `∪_i` in degree `n`
/// for a left factor of degree `p`.
fn cup_i_terms(n: usize, p: usize, i: usize) -> &'static [(u32, u32)] {
    const SLOTS: usize = 8;
    static TABLE: OnceLock<Vec<Vec<(u32, u32)>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![Vec::new(); SLOTS * SLOTS * SLOTS];
        for n in 0..SLOTS - 1 {
            let full = (1u32 << (n + 1)) - 1;
            for p in 0..=n {
                for i in 0..=n {
                    if i > n {
                        continue;
                    }
                    let mut terms = Vec::new();
                    for u in subsets(n + 1, n - i) {
                        let (mut u0, mut u1) = (0u32, 0u32);
                        let mut j = 0;
                        for x in 0..=n {
                            if u >> x & 1 == 1 {
                                j += 1;
                                if (x % 2) == (j % 2) {
                                    u0 |= 1 << x;
                                } else {
                                    u1 |= 1 << x;
                                }
                            }
                        }
                        if u0.count_ones() as usize == n - p {
                            terms.push((full & !u0, full & !u1));
                        }
                    }
                    t[(n * SLOTS + p) * SLOTS + i] = terms;
                }
            }
        }
        t
    });
    &table[(n * SLOTS + p) * SLOTS + i]
}
