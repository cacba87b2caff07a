//! Finite posets, automorphism groups and pole-poset recognition.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{contract_err, guard_err, Result};
use crate::relation::{GroundSet, Permutation, Relation};

/// Largest poset size accepted by [`enumerate_posets`].
pub const MAX_ENUMERATE: usize = 6;

/// A finite poset `(E, R)`; `leq.get(x, y)` holds iff `x ≤ y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    ground: GroundSet,
    leq: Relation,
}

impl Poset {
    pub fn new(leq: Relation) -> Result<Self> {
        let ground = GroundSet::new(leq.rows());
        Poset::with_ground(ground, leq)
    }

    pub fn with_ground(ground: GroundSet, leq: Relation) -> Result<Self> {
        if leq.rows() != ground.size() || !leq.is_order() {
            return contract_err("relation is not an order on the ground set");
        }
        Ok(Poset { ground, leq })
    }

    /// Order generated by the strict relations `pairs` (each `(x, y)` means
    /// `x < y`) under reflexive-transitive closure.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = Relation::identity(n);
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return contract_err(format!("pair ({x},{y}) out of range for size {n}"));
            }
            r.set(x, y, true);
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if r.get(i, k) {
                    for j in 0..n {
                        if r.get(k, j) {
                            r.set(i, j, true);
                        }
                    }
                }
            }
        }
        Poset::new(r)
    }

    pub fn chain(n: usize) -> Self {
        Poset { ground: GroundSet::new(n), leq: Relation::from_fn(n, n, |i, j| i <= j) }
    }

    pub fn antichain(n: usize) -> Self {
        Poset { ground: GroundSet::new(n), leq: Relation::identity(n) }
    }

    pub fn size(&self) -> usize {
        self.ground.size()
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn relation(&self) -> &Relation {
        &self.leq
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq.get(x, y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq.get(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn opposite(&self) -> Poset {
        Poset { ground: self.ground.clone(), leq: self.leq.opposite() }
    }

    pub fn is_chain(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| (0..x).all(|y| self.comparable(x, y)))
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        let n = self.size();
        (0..n).filter(|&x| (0..n).all(|y| !self.lt(x, y))).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        let n = self.size();
        (0..n).filter(|&x| (0..n).all(|y| !self.lt(y, x))).collect()
    }

    /// Length of the longest chain ending at each element (minimal elements have height 0).
    pub fn heights(&self) -> Vec<usize> {
        let n = self.size();
        let order = self.linear_extension();
        let mut h = vec![0; n];
        for (k, &x) in order.iter().enumerate() {
            for &y in &order[..k] {
                if self.lt(y, x) {
                    h[x] = h[x].max(h[y] + 1);
                }
            }
        }
        h
    }

    /// Elements sorted so that `x < y` implies `x` comes first; ties by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.size();
        let mut below: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| self.lt(y, x)).count()).collect();
        let mut out = Vec::with_capacity(n);
        let mut done = vec![false; n];
        while out.len() < n {
            let x = (0..n).find(|&x| !done[x] && below[x] == 0).expect("order relation is acyclic");
            done[x] = true;
            out.push(x);
            for y in 0..n {
                if self.lt(x, y) {
                    below[y] -= 1;
                }
            }
        }
        out
    }

    /// The subposet induced on `elems`, renumbered in the given order.
    pub fn induced(&self, elems: &[usize]) -> Poset {
        let k = elems.len();
        let leq = Relation::from_fn(k, k, |i, j| self.leq(elems[i], elems[j]));
        Poset { ground: GroundSet::new(k), leq }
    }

    /// The poset with element `x` renamed `σ(x)`.
    pub fn relabel(&self, sigma: &Permutation) -> Poset {
        let n = self.size();
        let inv = sigma.inverse();
        let leq = Relation::from_fn(n, n, |i, j| self.leq(inv.apply(i), inv.apply(j)));
        Poset { ground: GroundSet::new(n), leq }
    }

    fn flat_code(&self, perm: &[usize]) -> u64 {
        // Row-major flattening, first entry most significant; element
        // `perm[i]` sits at position `i`.
        let n = perm.len();
        let mut code = 0u64;
        for i in 0..n {
            for j in 0..n {
                code = code << 1 | self.leq(perm[i], perm[j]) as u64;
            }
        }
        code
    }

    /// Lexicographically minimal flattened order matrix over all relabelings.
    pub fn canonical_code(&self) -> Result<u64> {
        let n = self.size();
        if n > 8 {
            return guard_err(format!("canonical form needs size <= 8, got {n}"));
        }
        Ok(Permutation::all(n).iter().map(|p| self.flat_code(p.image())).min().unwrap_or(0))
    }

    pub fn is_isomorphic(&self, other: &Poset) -> Result<bool> {
        Ok(self.size() == other.size() && self.canonical_code()? == other.canonical_code()?)
    }

    fn from_code(n: usize, code: u64) -> Poset {
        let total = n * n;
        let leq = Relation::from_fn(n, n, |i, j| code >> (total - 1 - (i * n + j)) & 1 == 1);
        Poset { ground: GroundSet::new(n), leq }
    }
}

/// A block of a pole decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Singleton(usize),
    /// Two incomparable elements, smaller index first.
    TwinPair(usize, usize),
}

impl Block {
    pub fn elements(&self) -> Vec<usize> {
        match *self {
            Block::Singleton(x) => vec![x],
            Block::TwinPair(a, b) => vec![a, b],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Block::Singleton(_) => 1,
            Block::TwinPair(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `A_1 ∗ … ∗ A_r`, blocks listed bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PoleDecomposition {
    pub blocks: Vec<Block>,
}

impl PoleDecomposition {
    pub fn size(&self) -> usize {
        self.blocks.iter().map(Block::len).sum()
    }

    /// Block sizes bottom to top.
    pub fn level_sizes(&self) -> Vec<u8> {
        self.blocks.iter().map(|b| b.len() as u8).collect()
    }

    /// Members of singleton blocks.
    pub fn singletons(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter_map(|b| match *b {
                Block::Singleton(x) => Some(x),
                _ => None,
            })
            .collect()
    }

    /// Members of twin-pair blocks.
    pub fn twin_members(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .flat_map(|b| match *b {
                Block::TwinPair(a, b) => vec![a, b],
                _ => vec![],
            })
            .collect()
    }

    /// The involution exchanging each twin pair and fixing singletons.
    pub fn twin_swap(&self) -> Permutation {
        let mut image: Vec<usize> = (0..self.size()).collect();
        for b in &self.blocks {
            if let Block::TwinPair(a, c) = *b {
                image[a] = c;
                image[c] = a;
            }
        }
        Permutation::new(image).expect("blocks partition the carrier")
    }

    /// Index of the block holding each element.
    pub fn level_of(&self) -> Vec<usize> {
        let mut lvl = vec![0; self.size()];
        for (i, b) in self.blocks.iter().enumerate() {
            for x in b.elements() {
                lvl[x] = i;
            }
        }
        lvl
    }

    /// Rebuilds the order of the stacked blocks.
    pub fn to_relation(&self) -> Relation {
        let lvl = self.level_of();
        let n = self.size();
        Relation::from_fn(n, n, |x, y| x == y || lvl[x] < lvl[y])
    }
}

/// A finite group of permutations, sorted lexicographically (identity first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    pub elements: Vec<Permutation>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }
}

/// Order-preserving bijections with order-preserving inverse.
pub fn automorphisms(p: &Poset) -> AutGroup {
    let n = p.size();
    let profile: Vec<(usize, usize)> = (0..n)
        .map(|x| ((0..n).filter(|&y| p.leq(y, x)).count(), (0..n).filter(|&y| p.leq(x, y)).count()))
        .collect();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let cands = |x: usize| -> Vec<usize> { (0..n).filter(|&z| profile[z] == profile[x]).collect() };
    let cand: Vec<Vec<usize>> = (0..n).map(cands).collect();
    search_bijection(n, &cand, &mut image, &mut used, 0, &mut |img, x, z| {
        (0..x).all(|y| p.leq(x, y) == p.leq(z, img[y]) && p.leq(y, x) == p.leq(img[y], z))
    }, &mut |img| {
        out.push(Permutation::new(img.to_vec()).unwrap());
        true
    });
    out.sort();
    AutGroup { elements: out }
}

/// Backtracking over bijections `x ↦ image[x]` with per-element candidates.
/// `ok(image, x, z)` tests assigning `z` to `x` given `image[..x]`;
/// `emit` returns whether to keep searching.
fn search_bijection(
    n: usize,
    cand: &[Vec<usize>],
    image: &mut [usize],
    used: &mut [bool],
    x: usize,
    ok: &mut dyn FnMut(&[usize], usize, usize) -> bool,
    emit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if x == n {
        return emit(image);
    }
    for &z in &cand[x] {
        if used[z] || !ok(image, x, z) {
            continue;
        }
        used[z] = true;
        image[x] = z;
        let go_on = search_bijection(n, cand, image, used, x + 1, ok, emit);
        used[z] = false;
        image[x] = usize::MAX;
        if !go_on {
            return false;
        }
    }
    true
}

/// Searches a permutation `τ` with `R̄^op Δ_{τ⁻¹} ⊆ R`, i.e. `x ≰ y ⇒ y ≤ τ(x)`.
///
/// Automorphisms are tried first; on a pole poset the only valid one is the
/// twin swap. If no automorphism works, any valid permutation is returned.
pub fn is_pole_by_permutation(p: &Poset) -> Option<Permutation> {
    let n = p.size();
    // τ(x) must be an upper bound of {y : x ≰ y}
    let cand: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&z| (0..n).all(|y| p.leq(x, y) || p.leq(y, z))).collect())
        .collect();
    let mut found = None;
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search_bijection(n, &cand, &mut image, &mut used, 0, &mut |img, x, z| {
        (0..x).all(|y| p.leq(x, y) == p.leq(z, img[y]) && p.leq(y, x) == p.leq(img[y], z))
    }, &mut |img| {
        found = Some(img.to_vec());
        false
    });
    if found.is_none() {
        search_bijection(n, &cand, &mut image, &mut used, 0, &mut |_, _, _| true, &mut |img| {
            found = Some(img.to_vec());
            false
        });
    }
    found.map(|img| Permutation::new(img).unwrap())
}

/// Structural recognition: peel maximal elements from the top.
pub fn pole_decomposition(p: &Poset) -> Option<PoleDecomposition> {
    let n = p.size();
    let mut alive = vec![true; n];
    let mut left = n;
    let mut blocks = Vec::new();
    while left > 0 {
        let maxi: Vec<usize> =
            (0..n).filter(|&x| alive[x] && (0..n).all(|y| !alive[y] || !p.lt(x, y))).collect();
        let block = match maxi[..] {
            [m] => Block::Singleton(m),
            [a, b] => {
                let below_both =
                    (0..n).all(|y| !alive[y] || y == a || y == b || (p.leq(y, a) && p.leq(y, b)));
                if !below_both {
                    return None;
                }
                Block::TwinPair(a, b)
            }
            _ => return None,
        };
        for x in block.elements() {
            alive[x] = false;
            left -= 1;
        }
        blocks.push(block);
    }
    blocks.reverse();
    Some(PoleDecomposition { blocks })
}

/// All posets of size `n` up to isomorphism, each in canonical form, sorted
/// by canonical code.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>> {
    if n > MAX_ENUMERATE {
        return guard_err(format!("poset enumeration limited to size {MAX_ENUMERATE}, got {n}"));
    }
    let labeled = naturally_labeled(n);
    let codes: BTreeSet<u64> = labeled
        .par_iter()
        .map(|p| p.canonical_code().expect("size checked"))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(codes.into_iter().map(|c| Poset::from_code(n, c)).collect())
}

/// Every order on `0..n` in which `x < y` implies `x < y` as integers.
/// Each isomorphism class has at least one such labeling.
pub fn naturally_labeled(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut out = Vec::new();
    let mut cur = Relation::identity(n);
    extend_natural(n, &pairs, 0, &mut cur, &mut out);
    out
}

fn extend_natural(n: usize, pairs: &[(usize, usize)], k: usize, cur: &mut Relation, out: &mut Vec<Poset>) {
    // Pairs are ordered by their larger element, so once all pairs ending
    // at j are fixed, transitivity through j can be checked.
    if k == pairs.len() {
        out.push(Poset { ground: GroundSet::new(n), leq: cur.clone() });
        return;
    }
    let (i, j) = pairs[k];
    let closes_column = k + 1 == pairs.len() || pairs[k + 1].1 != j;
    for bit in [false, true] {
        cur.set(i, j, bit);
        if closes_column && !column_transitive(cur, j) {
            continue;
        }
        extend_natural(n, pairs, k + 1, cur, out);
    }
    cur.set(i, j, false);
}

// Transitivity of every chain a ≤ b ≤ j once column j is complete.
fn column_transitive(r: &Relation, j: usize) -> bool {
    (0..j).all(|b| !r.get(b, j) || (0..b).all(|a| !r.get(a, b) || r.get(a, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        // a=0, b=1, c=2, d=3 with a<c, b<c, b<d
        Poset::from_relations(4, &[(0, 2), (1, 2), (1, 3)]).unwrap()
    }

    fn bowtie() -> Poset {
        Poset::from_relations(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphisms(&Poset::antichain(2)).order(), 2);
        assert_eq!(automorphisms(&Poset::chain(3)).order(), 1);
        assert_eq!(automorphisms(&bowtie()).order(), 2);
        assert_eq!(automorphisms(&Poset::antichain(4)).order(), 24);
        let two_pairs = Poset::from_relations(5, &[(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(automorphisms(&two_pairs).order(), 4);
    }

    #[test]
    fn permutation_criterion_examples() {
        assert!(is_pole_by_permutation(&Poset::antichain(3)).is_none());
        assert!(is_pole_by_permutation(&Poset::chain(3)).unwrap().is_identity());
        assert_eq!(is_pole_by_permutation(&Poset::antichain(2)).unwrap().image(), &[1, 0]);
        assert!(is_pole_by_permutation(&n_poset()).is_none());
        assert!(is_pole_by_permutation(&Poset::chain(0)).is_some());
    }

    #[test]
    fn structural_examples() {
        assert!(pole_decomposition(&n_poset()).is_none());
        let c3 = pole_decomposition(&Poset::chain(3)).unwrap();
        assert_eq!(c3.blocks, vec![Block::Singleton(0), Block::Singleton(1), Block::Singleton(2)]);
        let bt = pole_decomposition(&bowtie()).unwrap();
        assert_eq!(bt.blocks, vec![Block::Singleton(0), Block::TwinPair(1, 2), Block::Singleton(3)]);
        assert_eq!(pole_decomposition(&Poset::chain(0)).unwrap().blocks, vec![]);
        assert!(pole_decomposition(&Poset::antichain(3)).is_none());
        // V shape: two maximal elements over a bottom is a pole poset
        let v = Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(pole_decomposition(&v).unwrap().level_sizes(), vec![1, 2]);
    }

    #[test]
    fn bad_twin_level_rejected() {
        // a<c only: two maximal elements c, b but a is not below b
        let p = Poset::from_relations(3, &[(0, 2)]).unwrap();
        assert!(pole_decomposition(&p).is_none());
        assert!(is_pole_by_permutation(&p).is_none());
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
        assert!(enumerate_posets(7).is_err());
    }

    #[test]
    fn natural_labelings_count() {
        // naturally labeled posets: 1, 1, 2, 7, 40, 357
        let counts: Vec<usize> = (0..=5).map(|n| naturally_labeled(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 7, 40, 357]);
    }

    #[test]
    fn heights_and_extension() {
        let p = bowtie();
        assert_eq!(p.heights(), vec![0, 1, 1, 2]);
        let n = n_poset();
        let ext = n.linear_extension();
        for (i, &x) in ext.iter().enumerate() {
            for &y in &ext[i + 1..] {
                assert!(!n.lt(y, x));
            }
        }
    }

    #[test]
    fn rejects_non_order() {
        assert!(Poset::new(Relation::full(2, 2)).is_err());
    }
}
