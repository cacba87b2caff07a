//! Finite ground sets, binary relations stored as packed bit matrices, and
//! permutations.
//!
//! A [`Relation`] with `rows = Y` and `cols = X` is a correspondence from `X`
//! to `Y`, i.e. a subset of `Y × X`. Composition follows the same reverse
//! convention: `s.compose(&t)` is `S T`, which applies `T` first.

use std::fmt;

use crate::error::{contract_err, dim_err, Result};

const WORD: usize = 64;

/// A finite set identified with the indices `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Self {
        GroundSet { size, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return contract_err("ground set labels must be unique");
        }
        Ok(GroundSet { size: labels.len(), labels: Some(labels) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element: its label if present, else its index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }
}

/// A subset of `rows × cols`, row-major, each row packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        Relation { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        let mut r = Relation::empty(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                r.set(i, j, true);
            }
        }
        r
    }

    /// The identity relation `Δ_X` on a set of size `n`.
    pub fn identity(n: usize) -> Self {
        Relation::diagonal(n, 0..n)
    }

    /// `Δ_A = {(a, a) | a ∈ A}` inside `n × n`.
    pub fn diagonal(n: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Relation::empty(n, n);
        for a in elems {
            r.set(a, a, true);
        }
        r
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Relation::empty(rows, cols);
        for (i, j) in pairs {
            if i >= rows || j >= cols {
                return dim_err(format!("pair ({i},{j}) outside {rows}x{cols}"));
            }
            r.set(i, j, true);
        }
        Ok(r)
    }

    /// Builds a relation from a predicate on `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut r = Relation::empty(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    r.set(i, j, true);
                }
            }
        }
        r
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.stride + j / WORD];
        if v {
            *w |= 1 << (j % WORD);
        } else {
            *w &= !(1 << (j % WORD));
        }
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    /// Columns set in row `i`.
    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.cols).filter(move |&j| self.get(i, j))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| self.row_iter(i).map(move |j| (i, j)))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Row `a` of `self` is contained in row `b` of `other`.
    pub fn row_subset(&self, a: usize, other: &Relation, b: usize) -> bool {
        self.row_words(a).iter().zip(other.row_words(b)).all(|(x, y)| x & !y == 0)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.bits.iter().zip(&other.bits).all(|(x, y)| x & !y == 0)
    }

    /// `S T` for `S ⊆ Z×Y` (self) and `T ⊆ Y×X`; boolean matrix product.
    pub fn compose(&self, t: &Relation) -> Result<Relation> {
        if self.cols != t.rows {
            return dim_err(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, t.rows, t.cols
            ));
        }
        let mut out = Relation::empty(self.rows, t.cols);
        for z in 0..self.rows {
            let dst = z * out.stride;
            for y in self.row_iter(z) {
                for (k, w) in t.row_words(y).iter().enumerate() {
                    out.bits[dst + k] |= w;
                }
            }
        }
        Ok(out)
    }

    pub fn opposite(&self) -> Relation {
        Relation::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// `(E × E) − R`.
    pub fn complement(&self) -> Result<Relation> {
        if !self.is_square() {
            return dim_err(format!("complement needs a square relation, got {}x{}", self.rows, self.cols));
        }
        Ok(Relation::from_fn(self.rows, self.cols, |i, j| !self.get(i, j)))
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        if self.rows != other.rows || self.cols != other.cols {
            return dim_err("union of relations with different shapes");
        }
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        Ok(out)
    }

    pub fn is_reflexive(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| self.get(i, i))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| !(self.get(i, j) && self.get(j, i))))
    }

    pub fn is_transitive(&self) -> bool {
        match self.compose(self) {
            Ok(sq) => sq.is_subset(self),
            Err(_) => false,
        }
    }

    /// Reflexive, antisymmetric and transitive.
    pub fn is_order(&self) -> bool {
        self.is_reflexive() && self.is_antisymmetric() && self.is_transitive()
    }

    /// Rows rendered as strings over `{'0','1'}`.
    pub fn to_strings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect())
            .collect()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation{}x{}{:?}", self.rows, self.cols, self.pairs().collect::<Vec<_>>())
    }
}

/// A bijection of `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || seen[x] {
                return contract_err(format!("{image:?} is not a permutation"));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Exchanges `a` and `b`, fixing everything else.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Permutation::identity(n);
        p.image.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { image: other.image.iter().map(|&x| self.image[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { image: inv }
    }

    /// `Δ_σ = {(σ(x), x)}`.
    pub fn delta(&self) -> Relation {
        let n = self.image.len();
        let mut r = Relation::empty(n, n);
        for (x, &y) in self.image.iter().enumerate() {
            r.set(y, x, true);
        }
        r
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { image: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let s = rel(2, &[(0, 1), (1, 1)]);
        assert_eq!(Relation::identity(2).compose(&s).unwrap(), s);
        assert_eq!(Relation::empty(2, 2).compose(&s).unwrap(), Relation::empty(2, 2));
        assert_eq!(rel(2, &[(0, 1)]).compose(&rel(2, &[(1, 0)])).unwrap(), rel(2, &[(0, 0)]));
    }

    #[test]
    fn compose_shape_mismatch() {
        let a = Relation::empty(2, 3);
        let b = Relation::empty(2, 2);
        assert!(matches!(a.compose(&b), Err(crate::Error::Dimension(_))));
    }

    #[test]
    fn rectangular_compose() {
        // Z = {0}, Y = {0,1,2}, X = {0,1}
        let s = Relation::from_pairs(1, 3, [(0, 2)]).unwrap();
        let t = Relation::from_pairs(3, 2, [(2, 1), (0, 0)]).unwrap();
        assert_eq!(s.compose(&t).unwrap(), Relation::from_pairs(1, 2, [(0, 1)]).unwrap());
    }

    #[test]
    fn opposite_examples() {
        let swap = Permutation::new(vec![1, 0]).unwrap();
        let sigma = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(sigma.delta().opposite(), sigma.inverse().delta());
        assert_eq!(swap.delta().opposite(), swap.delta());
        assert_eq!(Relation::empty(3, 3).opposite(), Relation::empty(3, 3));
        assert_eq!(rel(2, &[(0, 1)]).opposite(), rel(2, &[(1, 0)]));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(Permutation::identity(3).delta(), Relation::identity(3));
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(swap.delta(), rel(2, &[(1, 0), (0, 1)]));
        let sigma = Permutation::new(vec![1, 2, 0]).unwrap();
        let prod = sigma.delta().compose(&sigma.inverse().delta()).unwrap();
        assert_eq!(prod, Relation::identity(3));
        let rho = Permutation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(sigma.delta().compose(&rho.delta()).unwrap(), sigma.compose(&rho).delta());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Relation::full(3, 3).complement().unwrap(), Relation::empty(3, 3));
        assert_eq!(Relation::identity(2).complement().unwrap(), rel(2, &[(0, 1), (1, 0)]));
        assert_eq!(rel(2, &[(0, 0), (1, 1), (0, 1)]).complement().unwrap(), rel(2, &[(1, 0)]));
        assert!(Relation::empty(2, 3).complement().is_err());
    }

    #[test]
    fn order_examples() {
        assert!(Relation::identity(3).is_order());
        assert!(!Relation::full(2, 2).is_order());
        assert!(rel(2, &[(0, 0), (1, 1), (0, 1)]).is_order());
        assert!(!rel(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).is_order());
        assert!(!Relation::empty(2, 3).is_order());
    }

    #[test]
    fn empty_ground_set() {
        let id = Relation::identity(0);
        assert_eq!(id.compose(&id).unwrap(), id);
        assert!(id.is_order());
        assert_eq!(Permutation::all(0).len(), 1);
    }

    #[test]
    fn wide_rows_span_words() {
        let n = 130;
        let r = Relation::from_fn(n, n, |i, j| i <= j);
        assert!(r.is_order());
        assert_eq!(r.compose(&r).unwrap(), r);
        assert_eq!(r.opposite().opposite(), r);
    }

    #[test]
    fn permutations_enumerated_in_order() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn labels_must_be_unique() {
        assert!(GroundSet::with_labels(vec!["a".into(), "a".into()]).is_err());
        let g = GroundSet::with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(g.size(), 2);
        assert_eq!(g.label(1), "b");
    }
}
