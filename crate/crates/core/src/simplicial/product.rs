//! Products of simplicial models.
//!
//! A nondegenerate `n`-simplex of `A × B` is a pair `(s_I x, s_J y)` with
//! `x`, `y` nondegenerate and `I ∩ J = ∅`, where `|I| = n - dim x` and
//! `|J| = n - dim y`.

use std::collections::HashMap;
use std::sync::Arc;

use super::operator::{subsets, Degeneracy, Target};
use super::{SimplicialError, SimplicialMap, SimplicialModel};

/// A nondegenerate simplex of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductCell {
    pub left_dim: usize,
    pub left: usize,
    pub right_dim: usize,
    pub right: usize,
    pub left_degen: Degeneracy,
    pub right_degen: Degeneracy,
}

pub struct Product {
    pub model: Arc<SimplicialModel>,
    pub left: Arc<SimplicialModel>,
    pub right: Arc<SimplicialModel>,
    pub cells: Vec<Vec<ProductCell>>,
    index: Vec<HashMap<ProductCell, usize>>,
}

impl Product {
    pub fn index_of(&self, n: usize, cell: &ProductCell) -> Option<usize> {
        self.index.get(n)?.get(cell).copied()
    }

    pub fn cell(&self, n: usize, k: usize) -> &ProductCell {
        &self.cells[n][k]
    }

    pub fn projection_left(&self) -> SimplicialMap {
        self.projection(|c| Target::new(c.left_degen, c.left), &self.left)
    }

    pub fn projection_right(&self) -> SimplicialMap {
        self.projection(|c| Target::new(c.right_degen, c.right), &self.right)
    }

    fn projection(&self, f: impl Fn(&ProductCell) -> Target, target: &Arc<SimplicialModel>) -> SimplicialMap {
        let assignment = self.cells.iter().map(|row| row.iter().map(&f).collect()).collect();
        SimplicialMap::new_unchecked(self.model.clone(), target.clone(), assignment)
            .expect("projections have the right shape")
    }

    /// The cell permutation induced by cell permutations of the factors
    /// (automorphisms `f × g`).
    pub fn product_permutation(&self, left: &[Vec<usize>], right: &[Vec<usize>]) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .map(|c| {
                        let image = ProductCell {
                            left: left[c.left_dim][c.left],
                            right: right[c.right_dim][c.right],
                            ..*c
                        };
                        self.index_of(n, &image).expect("automorphisms preserve cells")
                    })
                    .collect()
            })
            .collect()
    }

    /// The factor swap on `A × A`.
    pub fn swap_permutation(&self) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .map(|c| {
                        let image = ProductCell {
                            left_dim: c.right_dim,
                            left: c.right,
                            right_dim: c.left_dim,
                            right: c.left,
                            left_degen: c.right_degen,
                            right_degen: c.left_degen,
                        };
                        self.index_of(n, &image).expect("swap preserves cells when factors agree")
                    })
                    .collect()
            })
            .collect()
    }
}

/// `a × b`, truncated at `up_to`. Both factors must be complete through
/// `up_to`, since every product simplex involves factor simplices of the
/// same dimension.
pub fn product(a: &Arc<SimplicialModel>, b: &Arc<SimplicialModel>, up_to: usize) -> Result<Product, SimplicialError> {
    let limit = a.max_degree().min(b.max_degree());
    if up_to > limit || up_to == 0 {
        return Err(SimplicialError::DegreeOutOfRange { degree: up_to, max: limit });
    }
    let mut cells: Vec<Vec<ProductCell>> = Vec::new();
    let mut index: Vec<HashMap<ProductCell, usize>> = Vec::new();
    for n in 0..=up_to {
        let mut row = Vec::new();
        for p in 0..=n {
            for q in n - p..=n {
                for x in 0..a.count(p) {
                    for y in 0..b.count(q) {
                        for i in subsets(n, n - p) {
                            for j in subsets(n, n - q).filter(|j| j & i == 0) {
                                row.push(ProductCell {
                                    left_dim: p,
                                    left: x,
                                    right_dim: q,
                                    right: y,
                                    left_degen: Degeneracy::from_mask(i as u8),
                                    right_degen: Degeneracy::from_mask(j as u8),
                                });
                            }
                        }
                    }
                }
            }
        }
        row.sort();
        index.push(row.iter().enumerate().map(|(k, c)| (*c, k)).collect());
        cells.push(row);
    }
    let mut faces = vec![Vec::new()];
    for n in 1..=up_to {
        let mut f = Vec::with_capacity(cells[n].len() * (n + 1));
        for c in &cells[n] {
            for i in 0..=n {
                let l = a.face_of_target(Target::new(c.left_degen, c.left), n, i);
                let r = b.face_of_target(Target::new(c.right_degen, c.right), n, i);
                let common = l.degen.mask() & r.degen.mask();
                let k = Degeneracy::from_mask(common);
                let reindex = |d: Degeneracy| {
                    Degeneracy::from_positions(
                        d.positions().into_iter().filter(|&p| common >> p & 1 == 0).map(|p| k.apply(p)),
                    )
                };
                let m = n - 1 - k.len();
                let cell = ProductCell {
                    left_dim: n - 1 - l.degen.len(),
                    left: l.cell,
                    right_dim: n - 1 - r.degen.len(),
                    right: r.cell,
                    left_degen: reindex(l.degen),
                    right_degen: reindex(r.degen),
                };
                f.push(Target::new(k, index[m][&cell]));
            }
        }
        faces.push(f);
    }
    let counts = cells.iter().map(Vec::len).collect();
    let model = Arc::new(SimplicialModel::new(up_to, counts, faces)?);
    Ok(Product { model, left: a.clone(), right: b.clone(), cells, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::builders;

    #[test]
    fn torus_cell_counts() {
        let s = Arc::new(builders::circle());
        let t = product(&s, &s, 2).unwrap();
        assert_eq!(t.model.counts(), &[1, 3, 2]);
        assert_eq!(t.model.euler_characteristic(), 0);
        assert!(t.model.validate().is_empty());
    }

    #[test]
    fn product_with_point_is_the_factor() {
        let rp = Arc::new(builders::bar_b_z2(4));
        let pt = Arc::new(builders::point(4));
        let p = product(&rp, &pt, 4).unwrap();
        assert!(p.model.same_cells(&rp));
        assert!(p.projection_left().violations().is_empty());
    }

    #[test]
    fn four_torus_counts() {
        let s = Arc::new(builders::circle());
        let t2 = product(&s, &s, 6).unwrap().model;
        let t4 = product(&t2, &t2, 4).unwrap();
        assert_eq!(t4.model.counts(), &[1, 15, 50, 60, 24]);
        assert!(t4.model.validate().is_empty());
        assert!(t4.projection_left().violations().is_empty());
        assert!(t4.projection_right().violations().is_empty());
    }

    #[test]
    fn degree_limit_is_enforced() {
        let rp = Arc::new(builders::bar_b_z2(3));
        assert!(product(&rp, &rp, 4).is_err());
    }
}
