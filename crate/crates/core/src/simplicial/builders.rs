//! Constructors for the standard spaces.
//!
//! Spaces whose simplices are easy to list explicitly (bar constructions,
//! the cocycle model of K(ℤ/2, 2), standard simplices) go through
//! [`ExplicitSimplicialSet`]: all simplices are enumerated, the
//! nondegenerate ones are kept in sorted order, and every face is normalized
//! to `s_J x`.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::operator::{Degeneracy, Target};
use super::{FreeInvolution, SimplicialError, SimplicialMap, SimplicialModel, DEGREE_CAP};

/// A simplicial set given by explicit simplices and operators.
pub trait ExplicitSimplicialSet {
    type Simplex: Clone + Ord + Hash;
    /// Every simplex of dimension `n`, degenerate ones included.
    fn simplices(&self, n: usize) -> Vec<Self::Simplex>;
    /// `d_i` of an `n`-simplex.
    fn face(&self, s: &Self::Simplex, n: usize, i: usize) -> Self::Simplex;
    /// `s_j` of an `n`-simplex.
    fn degeneracy(&self, s: &Self::Simplex, n: usize, j: usize) -> Self::Simplex;
}

/// A built model together with the simplex behind each cell.
pub struct Built<S> {
    pub model: SimplicialModel,
    pub cells: Vec<Vec<S>>,
    index: Vec<HashMap<S, usize>>,
}

impl<S: Clone + Ord + Hash> Built<S> {
    /// Cell index of a nondegenerate simplex.
    pub fn index_of(&self, n: usize, s: &S) -> Option<usize> {
        self.index.get(n)?.get(s).copied()
    }

    /// Normal form `s_J x` of an arbitrary `n`-simplex.
    pub fn locate<X>(&self, set: &X, s: &S, n: usize) -> Target
    where
        X: ExplicitSimplicialSet<Simplex = S>,
    {
        let (j, root) = normalize(set, s, n);
        let cell = self.index_of(n - j.len(), &root).expect("root of a simplex is a listed cell");
        Target::new(j, cell)
    }
}

/// Splits `w = s_J x` with `x` nondegenerate.
fn normalize<X: ExplicitSimplicialSet>(set: &X, w: &X::Simplex, n: usize) -> (Degeneracy, X::Simplex) {
    let positions: Vec<usize> =
        (0..n).filter(|&j| set.degeneracy(&set.face(w, n, j), n - 1, j) == *w).collect();
    let mut root = w.clone();
    let mut dim = n;
    for &j in positions.iter().rev() {
        root = set.face(&root, dim, j + 1);
        dim -= 1;
    }
    (Degeneracy::from_positions(positions), root)
}

pub fn build<X: ExplicitSimplicialSet>(set: &X, max_degree: usize) -> Built<X::Simplex> {
    assert!((1..=DEGREE_CAP).contains(&max_degree), "degree out of the supported range");
    let mut cells: Vec<Vec<X::Simplex>> = Vec::new();
    let mut index: Vec<HashMap<X::Simplex, usize>> = Vec::new();
    for n in 0..=max_degree {
        let mut nd: Vec<X::Simplex> = set
            .simplices(n)
            .into_iter()
            .filter(|w| (0..n).all(|j| set.degeneracy(&set.face(w, n, j), n - 1, j) != *w))
            .collect();
        nd.sort();
        nd.dedup();
        index.push(nd.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect());
        cells.push(nd);
    }
    let mut faces = vec![Vec::new()];
    for n in 1..=max_degree {
        let mut f = Vec::with_capacity(cells[n].len() * (n + 1));
        for x in &cells[n] {
            for i in 0..=n {
                let (j, root) = normalize(set, &set.face(x, n, i), n - 1);
                f.push(Target::new(j, index[n - 1 - j.len()][&root]));
            }
        }
        faces.push(f);
    }
    let counts = cells.iter().map(Vec::len).collect();
    let model = SimplicialModel::new(max_degree, counts, faces).expect("explicit faces are well formed");
    Built { model, cells, index }
}

/// A finite group by its multiplication table.
#[derive(Clone, Debug)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, SimplicialError> {
        let n = table.len();
        let bad = |why: &str| SimplicialError::InvalidGroup(why.to_string());
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(bad("table must be square with entries in range"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| bad("no identity element"))?;
        for g in 0..n {
            if !(0..n).any(|h| table[g][h] == identity) {
                return Err(bad("an element has no inverse"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad("multiplication is not associative"));
                    }
                }
            }
        }
        Ok(GroupTable { table, identity })
    }

    pub fn cyclic(order: usize) -> Self {
        let table = (0..order).map(|a| (0..order).map(|b| (a + b) % order).collect()).collect();
        GroupTable::new(table).expect("cyclic groups are groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

/// The bar construction `B(G)`: `n`-simplices are `[g₁|…|gₙ]`.
pub struct BarB<'a>(pub &'a GroupTable);

impl ExplicitSimplicialSet for BarB<'_> {
    type Simplex = Vec<usize>;

    fn simplices(&self, n: usize) -> Vec<Vec<usize>> {
        let g = self.0.order();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out.into_iter().flat_map(|s| (0..g).map(move |x| [s.clone(), vec![x]].concat())).collect();
        }
        out
    }

    fn face(&self, s: &Vec<usize>, n: usize, i: usize) -> Vec<usize> {
        if i == 0 {
            s[1..].to_vec()
        } else if i == n {
            s[..n - 1].to_vec()
        } else {
            let mut out = s[..i - 1].to_vec();
            out.push(self.0.mul(s[i - 1], s[i]));
            out.extend_from_slice(&s[i + 1..]);
            out
        }
    }

    fn degeneracy(&self, s: &Vec<usize>, _n: usize, j: usize) -> Vec<usize> {
        let mut out = s.clone();
        out.insert(j, self.0.identity());
        out
    }
}

/// The contractible free ℤ/2-space `E(ℤ/2)`: `n`-simplices are
/// `(h₀,…,hₙ)` with `hᵢ ∈ ℤ/2`.
pub struct BarEZ2;

impl ExplicitSimplicialSet for BarEZ2 {
    type Simplex = Vec<u8>;

    fn simplices(&self, n: usize) -> Vec<Vec<u8>> {
        (0u32..1 << (n + 1)).map(|m| (0..=n).map(|v| (m >> v & 1) as u8).collect()).collect()
    }

    fn face(&self, s: &Vec<u8>, _n: usize, i: usize) -> Vec<u8> {
        let mut out = s.clone();
        out.remove(i);
        out
    }

    fn degeneracy(&self, s: &Vec<u8>, _n: usize, j: usize) -> Vec<u8> {
        let mut out = s.clone();
        out.insert(j, s[j]);
        out
    }
}

/// The standard simplex `Δᴺ`: `n`-simplices are nondecreasing sequences.
pub struct StandardSimplex(pub usize);

impl ExplicitSimplicialSet for StandardSimplex {
    type Simplex = Vec<u8>;

    fn simplices(&self, n: usize) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = (0..=self.0 as u8).map(|v| vec![v]).collect();
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|s| {
                    let last = *s.last().expect("nonempty");
                    (last..=self.0 as u8).map(move |v| [s.clone(), vec![v]].concat())
                })
                .collect();
        }
        out
    }

    fn face(&self, s: &Vec<u8>, _n: usize, i: usize) -> Vec<u8> {
        let mut out = s.clone();
        out.remove(i);
        out
    }

    fn degeneracy(&self, s: &Vec<u8>, _n: usize, j: usize) -> Vec<u8> {
        let mut out = s.clone();
        out.insert(j, s[j]);
        out
    }
}

/// The cocycle model of `K(ℤ/2, 2)`: `n`-simplices are normalized
/// 2-cocycles on `Δⁿ`. A cocycle is stored by its free values on the
/// triangles `{0, b, c}`, bit `8b + c`; the others follow from
/// `f(a,b,c) = f(0,b,c) + f(0,a,c) + f(0,a,b)`.
pub struct KZ2Two;

impl KZ2Two {
    fn value(s: u64, a: usize, b: usize, c: usize) -> bool {
        let free = |x: usize, y: usize| s >> (8 * x + y) & 1 == 1;
        if a == 0 {
            free(b, c)
        } else {
            free(b, c) ^ free(a, c) ^ free(a, b)
        }
    }

    fn pairs(n: usize) -> Vec<(usize, usize)> {
        (1..=n).flat_map(|b| (b + 1..=n).map(move |c| (b, c))).collect()
    }

    /// Pulls a cocycle back along a monotone map `[m] -> [n]`.
    fn restrict(s: u64, m: usize, f: impl Fn(usize) -> usize) -> u64 {
        let mut out = 0u64;
        for (b, c) in Self::pairs(m) {
            let (x, y, z) = (f(0), f(b), f(c));
            if x < y && y < z && Self::value(s, x, y, z) {
                out |= 1 << (8 * b + c);
            }
        }
        out
    }
}

impl ExplicitSimplicialSet for KZ2Two {
    type Simplex = u64;

    fn simplices(&self, n: usize) -> Vec<u64> {
        let pairs = Self::pairs(n);
        (0u64..1 << pairs.len())
            .map(|m| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| m >> k & 1 == 1)
                    .fold(0u64, |acc, (_, &(b, c))| acc | 1 << (8 * b + c))
            })
            .collect()
    }

    fn face(&self, s: &u64, n: usize, i: usize) -> u64 {
        Self::restrict(*s, n - 1, |v| if v < i { v } else { v + 1 })
    }

    fn degeneracy(&self, s: &u64, n: usize, j: usize) -> u64 {
        Self::restrict(*s, n + 1, |v| if v <= j { v } else { v - 1 })
    }
}

pub fn bar_b(group: &GroupTable, up_to: usize) -> SimplicialModel {
    build(&BarB(group), up_to).model
}

/// `B(ℤ/2)`, the standard model of ℝP^∞: one cell per degree.
pub fn bar_b_z2(up_to: usize) -> SimplicialModel {
    bar_b(&GroupTable::cyclic(2), up_to)
}

/// `E(ℤ/2)`: two cells per degree, the alternating sequences.
pub fn bar_e_z2(up_to: usize) -> SimplicialModel {
    build(&BarEZ2, up_to).model
}

/// The free swap on `E(ℤ/2)`, exchanging the two cells of each degree.
pub fn bar_e_z2_shift(model: &Arc<SimplicialModel>) -> Result<FreeInvolution, SimplicialError> {
    let perms = (0..=model.max_degree()).map(|n| (0..model.count(n)).map(|c| 1 - c).collect()).collect();
    FreeInvolution::new(model.clone(), perms)
}

pub fn k_z2_2(up_to: usize) -> SimplicialModel {
    build(&KZ2Two, up_to).model
}

pub fn standard_simplex(n: usize) -> SimplicialModel {
    build(&StandardSimplex(n), n.max(1)).model
}

/// The model with one vertex and nothing else, complete through `up_to`.
pub fn point(up_to: usize) -> SimplicialModel {
    let mut counts = vec![0; up_to + 1];
    counts[0] = 1;
    SimplicialModel::new(up_to, counts, vec![Vec::new(); up_to + 1]).expect("point is well formed")
}

/// One vertex and one edge, complete through the degree cap.
pub fn circle() -> SimplicialModel {
    let mut counts = vec![0; DEGREE_CAP + 1];
    counts[0] = 1;
    counts[1] = 1;
    let mut faces = vec![Vec::new(); DEGREE_CAP + 1];
    faces[1] = vec![Target::cell(0), Target::cell(0)];
    SimplicialModel::new(DEGREE_CAP, counts, faces).expect("circle is well formed")
}

/// Two vertices and two edges forming a loop; the rotation by half a turn
/// is a free involution with quotient [`circle`].
pub fn circle_double_cover() -> SimplicialModel {
    let mut counts = vec![0; DEGREE_CAP + 1];
    counts[0] = 2;
    counts[1] = 2;
    let mut faces = vec![Vec::new(); DEGREE_CAP + 1];
    faces[1] = vec![Target::cell(1), Target::cell(0), Target::cell(0), Target::cell(1)];
    SimplicialModel::new(DEGREE_CAP, counts, faces).expect("loop is well formed")
}

pub fn circle_rotation(model: &Arc<SimplicialModel>) -> Result<FreeInvolution, SimplicialError> {
    let perms = (0..=model.max_degree()).map(|n| (0..model.count(n)).map(|c| 1 - c).collect()).collect();
    FreeInvolution::new(model.clone(), perms)
}

/// Two disjoint copies of `x` with the swap: a trivial double cover.
pub fn disjoint_double(x: &SimplicialModel) -> (Arc<SimplicialModel>, Result<FreeInvolution, SimplicialError>) {
    let counts: Vec<usize> = x.counts().iter().map(|c| 2 * c).collect();
    let mut faces = vec![Vec::new(); x.max_degree() + 1];
    for n in 1..=x.max_degree() {
        for copy in 0..2 {
            for cell in 0..x.count(n) {
                for t in x.faces_of(n, cell) {
                    let tdim = n - 1 - t.degen.len();
                    faces[n].push(Target::new(t.degen, t.cell + copy * x.count(tdim)));
                }
            }
        }
    }
    let model = Arc::new(SimplicialModel::new(x.max_degree(), counts, faces).expect("copies are well formed"));
    let perms = (0..=x.max_degree())
        .map(|n| {
            let c = x.count(n);
            (0..2 * c).map(|k| if k < c { k + c } else { k - c }).collect()
        })
        .collect();
    let inv = FreeInvolution::new(model.clone(), perms);
    (model, inv)
}

/// The map sending everything to (degeneracies of) one vertex.
pub fn constant_map(
    source: &Arc<SimplicialModel>,
    target: &Arc<SimplicialModel>,
    vertex: usize,
) -> Result<SimplicialMap, SimplicialError> {
    let assignment = (0..=source.max_degree())
        .map(|n| {
            let j = Degeneracy::from_positions(0..n);
            vec![Target::new(j, vertex); source.count(n)]
        })
        .collect();
    SimplicialMap::new(source.clone(), target.clone(), assignment)
}

/// Uniformly random cell permutations, one per degree.
pub fn random_relabeling<R: Rng>(model: &SimplicialModel, rng: &mut R) -> Vec<Vec<usize>> {
    (0..=model.max_degree())
        .map(|n| {
            let mut p: Vec<usize> = (0..model.count(n)).collect();
            p.shuffle(rng);
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_bar_has_one_cell_per_degree() {
        let m = bar_b_z2(6);
        assert_eq!(m.counts(), &[1; 7]);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn cocycle_model_cell_counts() {
        let m = k_z2_2(5);
        assert_eq!(m.counts(), &[1, 0, 1, 4, 41, 768]);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn free_contractible_model_has_two_cells_per_degree() {
        let m = Arc::new(bar_e_z2(5));
        assert_eq!(m.counts(), &[2; 6]);
        assert!(m.validate().is_empty());
        assert!(bar_e_z2_shift(&m).is_ok());
    }

    #[test]
    fn bar_of_cyclic_three() {
        let m = bar_b(&GroupTable::cyclic(3), 4);
        assert_eq!(m.counts(), &[1, 2, 4, 8, 16]);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn invalid_group_is_rejected() {
        assert!(GroupTable::new(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(GroupTable::new(vec![vec![0, 1, 2], vec![1, 2, 0]]).is_err());
    }

    #[test]
    fn standard_simplex_counts() {
        let m = standard_simplex(3);
        assert_eq!(m.counts(), &[4, 6, 4, 1]);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn circles_validate() {
        assert!(circle().validate().is_empty());
        assert!(circle_double_cover().validate().is_empty());
    }
}
