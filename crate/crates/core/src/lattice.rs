//! Finite lattices: join/meet tables, irreducibles, Möbius function,
//! downset lattices, opposites and pole signatures.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{contract_err, guard_err, Error, Result};
use crate::poset::{pole_decomposition, Poset};
use crate::relation::{GroundSet, Relation};

/// Largest lattice that will be tabulated (tables are stored as `u16`).
pub const MAX_LATTICE: usize = 4096;

/// Largest poset accepted by [`downset_lattice`].
pub const MAX_DOWNSET_BASE: usize = 16;

/// Join-irreducibles with their unique lower covers, and meet-irreducibles
/// with their unique upper covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleData {
    /// Join-irreducible elements, ascending.
    pub irr: Vec<usize>,
    /// `r(e)` for join-irreducible `e`.
    pub r_map: Vec<Option<usize>>,
    /// Meet-irreducible elements, ascending.
    pub meet_irr: Vec<usize>,
    /// `s(a)` for meet-irreducible `a`.
    pub s_map: Vec<Option<usize>>,
}

/// A finite lattice. Element indices are positions in the underlying poset.
pub struct Lattice {
    poset: Poset,
    geq: Relation,
    join: Vec<u16>,
    meet: Vec<u16>,
    bottom: usize,
    top: usize,
    order: Vec<usize>,
    irred: IrreducibleData,
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
}

impl Clone for Lattice {
    fn clone(&self) -> Self {
        Lattice {
            poset: self.poset.clone(),
            geq: self.geq.clone(),
            join: self.join.clone(),
            meet: self.meet.clone(),
            bottom: self.bottom,
            top: self.top,
            order: self.order.clone(),
            irred: self.irred.clone(),
            mobius_rows: self.mobius_rows.clone(),
        }
    }
}

// Tables are determined by the order.
impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(size {}, leq {:?})", self.size(), self.poset.relation().to_strings())
    }
}

impl Lattice {
    fn from_tables(poset: Poset, join: Vec<u16>, meet: Vec<u16>, bottom: usize, top: usize) -> Lattice {
        let n = poset.size();
        let geq = poset.relation().opposite();
        let order = poset.linear_extension();
        let mut lat = Lattice {
            poset,
            geq,
            join,
            meet,
            bottom,
            top,
            order,
            irred: IrreducibleData { irr: vec![], r_map: vec![], meet_irr: vec![], s_map: vec![] },
            mobius_rows: (0..n).map(|_| OnceLock::new()).collect(),
        };
        lat.irred = lat.compute_irreducibles();
        lat
    }

    pub fn chain(n: usize) -> Result<Lattice> {
        lattice_from_poset(&Poset::chain(n)).ok_or_else(|| Error::Contract("empty chain is not a lattice".into()))
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.poset.lt(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size() + y] as usize
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size() + y] as usize
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |a, b| self.join(a, b))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |a, b| self.meet(a, b))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// A linear extension of the order.
    pub fn linear_extension(&self) -> &[usize] {
        &self.order
    }

    pub fn irreducibles(&self) -> &IrreducibleData {
        &self.irred
    }

    /// Join-irreducible elements, ascending.
    pub fn irr(&self) -> &[usize] {
        &self.irred.irr
    }

    pub fn is_irreducible(&self, e: usize) -> bool {
        self.irred.r_map[e].is_some()
    }

    /// `r(e) = sup{x | x < e}` for join-irreducible `e`.
    pub fn r(&self, e: usize) -> Option<usize> {
        self.irred.r_map[e]
    }

    /// `s(a) = inf{x | a < x}` for meet-irreducible `a`.
    pub fn s(&self, a: usize) -> Option<usize> {
        self.irred.s_map[a]
    }

    /// Elements of `[x, y]` in linear-extension order.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        self.order.iter().copied().filter(|&z| self.leq(x, z) && self.leq(z, y)).collect()
    }

    pub fn up_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.poset.relation().row_iter(x)
    }

    pub fn down_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.geq.row_iter(x)
    }

    fn covers(&self, y: usize) -> (Vec<usize>, Vec<usize>) {
        let lower: Vec<usize> = self
            .down_set(y)
            .filter(|&x| x != y && self.down_set(y).all(|z| z == x || z == y || !self.lt(x, z)))
            .collect();
        let upper: Vec<usize> = self
            .up_set(y)
            .filter(|&x| x != y && self.up_set(y).all(|z| z == x || z == y || !self.lt(z, x)))
            .collect();
        (lower, upper)
    }

    fn compute_irreducibles(&self) -> IrreducibleData {
        let n = self.size();
        let mut d = IrreducibleData { irr: vec![], r_map: vec![None; n], meet_irr: vec![], s_map: vec![None; n] };
        for y in 0..n {
            let (lower, upper) = self.covers(y);
            if let [r] = lower[..] {
                d.irr.push(y);
                d.r_map[y] = Some(r);
            }
            if let [s] = upper[..] {
                d.meet_irr.push(y);
                d.s_map[y] = Some(s);
            }
        }
        d
    }

    fn mobius_row(&self, x: usize) -> Result<&Vec<i64>> {
        if let Some(row) = self.mobius_rows[x].get() {
            return Ok(row);
        }
        let mut row = vec![0i64; self.size()];
        for (k, &y) in self.order.iter().enumerate() {
            if !self.leq(x, y) {
                continue;
            }
            if y == x {
                row[y] = 1;
                continue;
            }
            let mut s = 0i64;
            for &z in &self.order[..k] {
                if self.leq(x, z) && self.lt(z, y) {
                    s = s.checked_add(row[z]).ok_or(Error::Overflow("mobius"))?;
                }
            }
            row[y] = s.checked_neg().ok_or(Error::Overflow("mobius"))?;
        }
        // A concurrent fill computes the same row, so losing the race is harmless.
        let _ = self.mobius_rows[x].set(row);
        Ok(self.mobius_rows[x].get().expect("just set"))
    }

    /// `μ(x, y)` for `x ≤ y`.
    pub fn mobius(&self, x: usize, y: usize) -> Result<i64> {
        if x >= self.size() || y >= self.size() {
            return Err(Error::Domain(format!("elements ({x},{y}) out of range")));
        }
        if !self.leq(x, y) {
            return Err(Error::Domain(format!("mobius({x},{y}) needs {x} <= {y}")));
        }
        Ok(self.mobius_row(x)?[y])
    }
}

/// Returns the lattice when every pair has a least upper and a greatest lower bound.
pub fn lattice_from_poset(p: &Poset) -> Option<Lattice> {
    let n = p.size();
    if n == 0 || n > MAX_LATTICE {
        return None;
    }
    let up = p.relation();
    let down = up.opposite();
    let bound = |rel: &Relation, x: usize, y: usize| -> Option<usize> {
        // least element of rel-row(x) ∩ rel-row(y): the one whose own row is the whole intersection
        let words: Vec<u64> = rel.row_words(x).iter().zip(rel.row_words(y)).map(|(a, b)| a & b).collect();
        let total: u32 = words.iter().map(|w| w.count_ones()).sum();
        (0..n).find(|&u| {
            words[u / 64] >> (u % 64) & 1 == 1
                && rel.row_words(u).iter().map(|w| w.count_ones()).sum::<u32>() == total
        })
    };
    let mut join = vec![0u16; n * n];
    let mut meet = vec![0u16; n * n];
    for x in 0..n {
        for y in x..n {
            let j = bound(up, x, y)? as u16;
            let m = bound(&down, x, y)? as u16;
            join[x * n + y] = j;
            join[y * n + x] = j;
            meet[x * n + y] = m;
            meet[y * n + x] = m;
        }
    }
    let bottom = (0..n).find(|&b| (0..n).all(|y| p.leq(b, y)))?;
    let top = (0..n).find(|&t| (0..n).all(|y| p.leq(y, t)))?;
    Some(Lattice::from_tables(p.clone(), join, meet, bottom, top))
}

pub fn is_distributive(t: &Lattice) -> bool {
    let n = t.size();
    (0..n).all(|x| {
        (0..n).all(|y| (0..n).all(|z| t.meet(x, t.join(y, z)) == t.join(t.meet(x, y), t.meet(x, z))))
    })
}

/// The lattice of down-closed subsets of a poset.
#[derive(Clone, Debug)]
pub struct DownsetLattice {
    pub lattice: Lattice,
    /// Bit mask of each element, sorted by (size, mask): `∅` first, `E` last.
    pub masks: Vec<u32>,
    /// Index of `E_{≤e}` for each `e`.
    pub principal: Vec<usize>,
}

impl DownsetLattice {
    pub fn index_of(&self, mask: u32) -> Option<usize> {
        self.masks.iter().position(|&m| m == mask)
    }
}

pub fn downset_lattice(p: &Poset) -> Result<DownsetLattice> {
    let n = p.size();
    if n > MAX_DOWNSET_BASE {
        return guard_err(format!("downset lattice needs |P| <= {MAX_DOWNSET_BASE}, got {n}"));
    }
    let below: Vec<u32> = (0..n).map(|e| (0..n).filter(|&x| p.leq(x, e)).fold(0, |m, x| m | 1 << x)).collect();
    let mut masks: Vec<u32> = (0u32..1 << n)
        .filter(|&m| (0..n).all(|e| m >> e & 1 == 0 || below[e] & !m == 0))
        .collect();
    if masks.len() > MAX_LATTICE {
        return guard_err(format!("downset lattice would have {} elements", masks.len()));
    }
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let k = masks.len();
    let mut index = vec![u16::MAX; 1 << n];
    for (i, &m) in masks.iter().enumerate() {
        index[m as usize] = i as u16;
    }
    let leq = Relation::from_fn(k, k, |i, j| masks[i] & !masks[j] == 0);
    let mut join = vec![0u16; k * k];
    let mut meet = vec![0u16; k * k];
    for i in 0..k {
        for j in 0..k {
            join[i * k + j] = index[(masks[i] | masks[j]) as usize];
            meet[i * k + j] = index[(masks[i] & masks[j]) as usize];
        }
    }
    let poset = Poset::with_ground(GroundSet::new(k), leq)?;
    let lattice = Lattice::from_tables(poset, join, meet, 0, k - 1);
    let principal = below.iter().map(|&m| index[m as usize] as usize).collect();
    Ok(DownsetLattice { lattice, masks, principal })
}

/// Same elements, reversed order.
pub fn opposite_lattice(t: &Lattice) -> Lattice {
    Lattice::from_tables(t.poset.opposite(), t.meet.clone(), t.join.clone(), t.top, t.bottom)
}

/// Level sizes of a pole lattice, bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct PoleSignature {
    level_sizes: Vec<u8>,
}

impl TryFrom<Vec<u8>> for PoleSignature {
    type Error = Error;

    fn try_from(v: Vec<u8>) -> Result<Self> {
        PoleSignature::new(v)
    }
}

impl From<PoleSignature> for Vec<u8> {
    fn from(s: PoleSignature) -> Vec<u8> {
        s.level_sizes
    }
}

impl PoleSignature {
    pub fn new(level_sizes: Vec<u8>) -> Result<Self> {
        let ok = !level_sizes.is_empty()
            && level_sizes.iter().all(|&s| s == 1 || s == 2)
            && level_sizes[0] == 1
            && *level_sizes.last().unwrap() == 1
            && !level_sizes.windows(2).any(|w| w == [2, 2]);
        if !ok {
            return contract_err(format!("{level_sizes:?} is not a pole lattice signature"));
        }
        Ok(PoleSignature { level_sizes })
    }

    pub fn levels(&self) -> &[u8] {
        &self.level_sizes
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        self.level_sizes.iter().map(|&s| s as usize).sum()
    }

    pub fn twin_pairs(&self) -> usize {
        self.level_sizes.iter().filter(|&&s| s == 2).count()
    }

    /// All signatures with at most `max_size` elements, in lexicographic order.
    pub fn all_up_to(max_size: usize) -> Vec<PoleSignature> {
        fn grow(cur: &mut Vec<u8>, used: usize, max: usize, out: &mut Vec<PoleSignature>) {
            if *cur.last().unwrap() == 1 {
                out.push(PoleSignature { level_sizes: cur.clone() });
            }
            for s in [1u8, 2] {
                let prev_two = *cur.last().unwrap() == 2;
                if used + s as usize > max || (s == 2 && prev_two) {
                    continue;
                }
                cur.push(s);
                grow(cur, used + s as usize, max, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if max_size >= 1 {
            grow(&mut vec![1], 1, max_size, &mut out);
        }
        out.sort();
        out
    }

    /// The pole lattice with elements numbered bottom-up by level.
    pub fn to_lattice(&self) -> Lattice {
        let level: Vec<usize> =
            self.level_sizes.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s as usize)).collect();
        let n = level.len();
        let leq = Relation::from_fn(n, n, |x, y| x == y || level[x] < level[y]);
        let poset = Poset::new(leq).expect("stacked levels form an order");
        lattice_from_poset(&poset).expect("valid signatures describe lattices")
    }
}

impl fmt::Display for PoleSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.level_sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Present iff the underlying poset is a pole poset.
pub fn pole_signature(t: &Lattice) -> Option<PoleSignature> {
    let d = pole_decomposition(t.poset())?;
    Some(PoleSignature::new(d.level_sizes()).expect("pole lattices have valid signatures"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Lattice {
        PoleSignature::new(vec![1, 2, 1]).unwrap().to_lattice()
    }

    fn m3() -> Lattice {
        let p = Poset::from_relations(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        lattice_from_poset(&p).unwrap()
    }

    #[test]
    fn lattice_examples() {
        assert!(lattice_from_poset(&Poset::antichain(2)).is_none());
        assert!(lattice_from_poset(&Poset::chain(0)).is_none());
        let sq = square();
        assert_eq!((sq.join(1, 2), sq.meet(1, 2)), (3, 0));
        let c = Lattice::chain(4).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(c.join(x, y), x.max(y));
                assert_eq!(c.meet(x, y), x.min(y));
            }
        }
    }

    #[test]
    fn irreducible_examples() {
        assert_eq!(square().irr(), &[1, 2]);
        assert_eq!(Lattice::chain(4).unwrap().irr(), &[1, 2, 3]);
        let sq = square();
        assert_eq!(sq.r(1), Some(0));
        assert_eq!(sq.s(2), Some(3));
        assert_eq!(sq.irreducibles().meet_irr, vec![1, 2]);
        assert!(Lattice::chain(1).unwrap().irr().is_empty());
    }

    #[test]
    fn mobius_examples() {
        let sq = square();
        assert_eq!(sq.mobius(0, 0).unwrap(), 1);
        assert_eq!(sq.mobius(0, 3).unwrap(), 1);
        assert_eq!(sq.mobius(0, 1).unwrap(), -1);
        let c = Lattice::chain(3).unwrap();
        assert_eq!(c.mobius(0, 1).unwrap(), -1);
        assert_eq!(c.mobius(0, 2).unwrap(), 0);
        assert!(matches!(c.mobius(2, 0), Err(Error::Domain(_))));
        assert_eq!(m3().mobius(0, 4).unwrap(), 2);
    }

    #[test]
    fn distributivity_examples() {
        assert!(!is_distributive(&m3()));
        assert!(is_distributive(&Lattice::chain(5).unwrap()));
        for s in PoleSignature::all_up_to(7) {
            assert!(is_distributive(&s.to_lattice()));
        }
    }

    #[test]
    fn downset_examples() {
        let d = downset_lattice(&Poset::antichain(2)).unwrap();
        assert_eq!(pole_signature(&d.lattice), Some(PoleSignature::new(vec![1, 2, 1]).unwrap()));
        let d = downset_lattice(&Poset::chain(3)).unwrap();
        assert_eq!(d.lattice.size(), 4);
        assert!(d.lattice.poset().is_chain());
        let d = downset_lattice(&Poset::chain(0)).unwrap();
        assert_eq!(d.lattice.size(), 1);
        assert!(downset_lattice(&Poset::antichain(17)).is_err());
        // antichain of 13 gives 8192 down-sets, past the table limit
        assert!(matches!(downset_lattice(&Poset::antichain(13)), Err(Error::ResourceGuard(_))));
    }

    #[test]
    fn opposite_examples() {
        let sq = square();
        let op = opposite_lattice(&sq);
        assert_eq!(op.poset().canonical_code().unwrap(), sq.poset().canonical_code().unwrap());
        let c = Lattice::chain(3).unwrap();
        let cop = opposite_lattice(&c);
        assert_eq!((cop.bottom(), cop.top()), (2, 0));
        assert_eq!(cop.join(0, 1), 0);
        assert_eq!(opposite_lattice(&cop), c);
        assert_eq!(cop.irr(), &[0, 1]);
    }

    #[test]
    fn signature_examples() {
        assert_eq!(pole_signature(&square()).unwrap().levels(), &[1, 2, 1]);
        assert_eq!(pole_signature(&Lattice::chain(4).unwrap()).unwrap().levels(), &[1, 1, 1, 1]);
        assert!(pole_signature(&m3()).is_none());
        assert!(PoleSignature::new(vec![1, 2, 2, 1]).is_err());
        assert!(PoleSignature::new(vec![2, 1]).is_err());
        assert!(PoleSignature::new(vec![]).is_err());
    }

    #[test]
    fn signature_grammar_counts() {
        // sizes 1..=5: [1]; [1,1]; [1,1,1]; [1,1,1,1],[1,2,1]; 3 of size 5
        let all = PoleSignature::all_up_to(5);
        let by_size: Vec<usize> = (1..=5).map(|k| all.iter().filter(|s| s.size() == k).count()).collect();
        assert_eq!(by_size, vec![1, 1, 1, 2, 3]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn signature_serde_validates() {
        let s: PoleSignature = serde_json::from_str("[1,2,1]").unwrap();
        assert_eq!(s.size(), 4);
        assert!(serde_json::from_str::<PoleSignature>("[1,2,2,1]").is_err());
    }
}
