//! Degeneracy operators and monotone maps between ordinals `[n] = {0..n}`.
//!
//! A degeneracy of an `n`-simplex is a monotone surjection `[n] -> [n - |J|]`
//! determined by the set `J` of positions `j` with `j` and `j + 1` identified:
//! `σ_J(v) = v - #{j ∈ J : j < v}`. As a word it reads `s_{j_k} … s_{j_1}`
//! with `j_k > … > j_1`, the canonical form of a composite of degeneracies.

use std::fmt;

/// Vertices in a simplex of the highest supported dimension, plus headroom.
pub const MAX_VERTICES: usize = 8;

/// A degeneracy operator, stored as the bitmask of collapsed positions.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degeneracy(u8);

impl Degeneracy {
    pub const IDENTITY: Degeneracy = Degeneracy(0);

    pub fn from_mask(mask: u8) -> Self {
        Degeneracy(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn single(j: usize) -> Self {
        Degeneracy(1 << j)
    }

    pub fn from_positions<I: IntoIterator<Item = usize>>(positions: I) -> Self {
        Degeneracy(positions.into_iter().fold(0u8, |m, j| m | (1 << j)))
    }

    /// Parses a word `s_{j_k} … s_{j_1}` listed as `[j_k, …, j_1]`.
    /// Only the canonical, strictly decreasing form is accepted.
    pub fn from_word(word: &[usize]) -> Option<Self> {
        if word.windows(2).any(|w| w[0] <= w[1]) || word.iter().any(|&j| j >= MAX_VERTICES - 1) {
            return None;
        }
        Some(Self::from_positions(word.iter().copied()))
    }

    /// Canonical word, strictly decreasing.
    pub fn word(self) -> Vec<usize> {
        let mut w = self.positions();
        w.reverse();
        w
    }

    /// Collapsed positions, ascending.
    pub fn positions(self) -> Vec<usize> {
        (0..8).filter(|&j| self.0 >> j & 1 == 1).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// Largest collapsed position, if any.
    pub fn top(self) -> Option<usize> {
        (self.0 != 0).then(|| 7 - self.0.leading_zeros() as usize)
    }

    /// `σ_J(v)`.
    #[inline]
    pub fn apply(self, v: usize) -> usize {
        v - (self.0 as u32 & ((1u32 << v) - 1)).count_ones() as usize
    }

    /// `σ_J` as a monotone map on `[n]`.
    pub fn surjection(self, n: usize) -> Mono {
        Mono::from_fn(n + 1, |v| self.apply(v))
    }

    /// The degeneracy `σ_after ∘ σ_self`, where `self` acts on `[n]`.
    pub fn then(self, after: Degeneracy, n: usize) -> Degeneracy {
        let composite = Mono::from_fn(n + 1, |v| after.apply(self.apply(v)));
        composite.factor().0
    }
}

impl fmt::Debug for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.word().iter().map(|j| format!("s{j}")).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// A face target: the simplex `s_J x` for a nondegenerate cell `x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Target {
    pub degen: Degeneracy,
    pub cell: usize,
}

impl Target {
    pub fn cell(cell: usize) -> Self {
        Target { degen: Degeneracy::IDENTITY, cell }
    }

    pub fn new(degen: Degeneracy, cell: usize) -> Self {
        Target { degen, cell }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degen.is_identity()
    }

    /// The cell index if this target is nondegenerate.
    pub fn nondegenerate(&self) -> Option<usize> {
        (!self.is_degenerate()).then_some(self.cell)
    }
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degen.is_identity() {
            write!(f, "#{}", self.cell)
        } else {
            write!(f, "{:?}#{}", self.degen, self.cell)
        }
    }
}

/// A monotone map `[m] -> [k]`, stored as its values on `0..=m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono {
    len: u8,
    values: [u8; MAX_VERTICES],
}

impl Mono {
    pub fn from_fn(len: usize, f: impl Fn(usize) -> usize) -> Self {
        debug_assert!(len <= MAX_VERTICES);
        let mut values = [0u8; MAX_VERTICES];
        for (v, slot) in values.iter_mut().enumerate().take(len) {
            *slot = f(v) as u8;
        }
        Mono { len: len as u8, values }
    }

    pub fn from_slice(values: &[usize]) -> Self {
        Self::from_fn(values.len(), |v| values[v])
    }

    /// The injection `[popcount - 1] -> [k]` whose image is `mask`.
    pub fn injection(mask: u32) -> Self {
        let mut values = [0u8; MAX_VERTICES];
        let mut len = 0;
        for v in 0..32 {
            if mask >> v & 1 == 1 {
                values[len] = v as u8;
                len += 1;
            }
        }
        Mono { len: len as u8, values }
    }

    /// The coface `δ_i : [n - 1] -> [n]` skipping `i`.
    pub fn coface(n: usize, i: usize) -> Self {
        Self::from_fn(n, |v| if v < i { v } else { v + 1 })
    }

    /// Number of vertices in the domain.
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn values(&self) -> &[u8] {
        &self.values[..self.len as usize]
    }

    #[inline]
    pub fn at(&self, v: usize) -> usize {
        self.values[v] as usize
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_fn(self.len(), |v| f(self.at(v)))
    }

    /// Epi-mono factorization: the surjection onto the image, and the image
    /// as a vertex mask of the codomain.
    pub fn factor(&self) -> (Degeneracy, u32) {
        let mut j = 0u8;
        let mut image = 0u32;
        for v in 0..self.len() {
            image |= 1 << self.at(v);
            if v + 1 < self.len() && self.at(v) == self.at(v + 1) {
                j |= 1 << v;
            }
        }
        (Degeneracy(j), image)
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values())
    }
}

/// Removes bit `i` from `mask` and shifts higher bits down.
#[inline]
pub fn delete_bit(mask: u32, i: usize) -> u32 {
    let low = mask & ((1 << i) - 1);
    let high = mask >> (i + 1);
    low | (high << i)
}

/// Iterator over subsets of `0..n` of size `k`, as bitmasks, ascending.
pub fn subsets(n: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << n)).filter(move |m| m.count_ones() as usize == k)
}
