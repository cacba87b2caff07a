//! Evaluations `F_T(X)` of the functor attached to a lattice: maps `X → T`,
//! their free module, the action of correspondences, and the exact rank and
//! span computations built on them.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract_err, dim_err, guard_err, Error, Result};
use crate::klin::{e_t, LinMorph};
use crate::lattice::{downset_lattice, is_distributive, opposite_lattice, pole_signature, DownsetLattice, Lattice};
use crate::linalg::rank_of;
use crate::lincomb::LinComb;
use crate::morphism::same_lattice;
use crate::poset::{pole_decomposition, Block, Poset};
use crate::relation::{GroundSet, Relation};

/// Largest `|T|^|X|` for which all maps `X → T` are listed.
pub const MAX_MAPS: u64 = 1 << 22;

/// A map `X → T`.
#[derive(Clone, Debug)]
pub struct LatticeMap {
    domain: GroundSet,
    codomain: Arc<Lattice>,
    values: Vec<usize>,
}

impl PartialEq for LatticeMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && self.domain.size() == other.domain.size()
            && same_lattice(&self.codomain, &other.codomain)
    }
}

impl Eq for LatticeMap {}

impl LatticeMap {
    pub fn new(domain: GroundSet, codomain: Arc<Lattice>, values: Vec<usize>) -> Result<Self> {
        if values.len() != domain.size() {
            return dim_err(format!("{} values for a domain of size {}", values.len(), domain.size()));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= codomain.size()) {
            return contract_err(format!("value {v} outside a lattice of size {}", codomain.size()));
        }
        Ok(LatticeMap { domain, codomain, values })
    }

    pub fn domain(&self) -> &GroundSet {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Lattice> {
        &self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// The image `φ(X)` as a sorted set.
    pub fn image(&self) -> Vec<usize> {
        let mut v = self.values.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// An element of `F_T(X)`: `Σ c_φ [φ]` with maps keyed by their values.
#[derive(Clone, Debug)]
pub struct FreeElt {
    domain_size: usize,
    codomain: Arc<Lattice>,
    terms: LinComb<Vec<usize>>,
}

impl PartialEq for FreeElt {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && self.domain_size == other.domain_size
            && same_lattice(&self.codomain, &other.codomain)
    }
}

impl Eq for FreeElt {}

impl FreeElt {
    pub fn zero(domain_size: usize, codomain: Arc<Lattice>) -> Self {
        FreeElt { domain_size, codomain, terms: LinComb::zero() }
    }

    pub fn from_map(phi: &LatticeMap, c: i64) -> Self {
        FreeElt {
            domain_size: phi.domain.size(),
            codomain: phi.codomain.clone(),
            terms: LinComb::single(phi.values.clone(), c),
        }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn codomain(&self) -> &Arc<Lattice> {
        &self.codomain
    }

    pub fn terms(&self) -> &LinComb<Vec<usize>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, values: &[usize]) -> i64 {
        self.terms.coeff(&values.to_vec())
    }

    pub fn maps(&self) -> impl Iterator<Item = (LatticeMap, i64)> + '_ {
        self.terms.iter().map(|(v, c)| {
            let phi = LatticeMap { domain: GroundSet::new(self.domain_size), codomain: self.codomain.clone(), values: v.clone() };
            (phi, c)
        })
    }

    fn check_shape(&self, other: &FreeElt) -> Result<()> {
        if self.domain_size != other.domain_size || !same_lattice(&self.codomain, &other.codomain) {
            return dim_err("elements of different evaluations");
        }
        Ok(())
    }

    pub fn add(&self, other: &FreeElt) -> Result<FreeElt> {
        self.check_shape(other)?;
        Ok(FreeElt { terms: self.terms.add(&other.terms)?, ..self.clone() })
    }

    pub fn sub(&self, other: &FreeElt) -> Result<FreeElt> {
        self.check_shape(other)?;
        Ok(FreeElt { terms: self.terms.sub(&other.terms)?, ..self.clone() })
    }

    pub fn scale(&self, c: i64) -> Result<FreeElt> {
        Ok(FreeElt { terms: self.terms.scale(c)?, ..self.clone() })
    }
}

/// `(Sφ)(y) = ⋁_{(y,x) ∈ S} φ(x)` for `S ⊆ Y × X`.
pub fn act_correspondence(s: &Relation, phi: &LatticeMap) -> Result<LatticeMap> {
    if s.cols() != phi.domain.size() {
        return dim_err(format!("correspondence has {} columns, map has domain size {}", s.cols(), phi.domain.size()));
    }
    let t = &phi.codomain;
    let values = (0..s.rows()).map(|y| t.join_all(s.row_iter(y).map(|x| phi.values[x]))).collect();
    Ok(LatticeMap { domain: GroundSet::new(s.rows()), codomain: t.clone(), values })
}

/// Linear extension of [`act_correspondence`].
pub fn act_on_free(s: &Relation, x: &FreeElt) -> Result<FreeElt> {
    let mut out = FreeElt::zero(s.rows(), x.codomain.clone());
    for (phi, c) in x.maps() {
        out.terms.add_term(act_correspondence(s, &phi)?.values, c)?;
    }
    Ok(out)
}

/// A poset `(E, R)` with `T = I↓(E, R)` and the opposite lattice `T^op`,
/// which is the codomain handled by [`rho_iso`].
#[derive(Clone, Debug)]
pub struct DownsetDual {
    pub base: Poset,
    pub downsets: DownsetLattice,
    pub dual: Arc<Lattice>,
}

pub fn downset_dual(p: &Poset) -> Result<DownsetDual> {
    let downsets = downset_lattice(p)?;
    let dual = Arc::new(opposite_lattice(&downsets.lattice));
    Ok(DownsetDual { base: p.clone(), downsets, dual })
}

/// `ρ_X(φ) = {(x, e) : e ∉ φ(x)}` for `φ: X → T^op`.
pub fn rho_iso(phi: &LatticeMap, d: &DownsetDual) -> Result<Relation> {
    if !same_lattice(&phi.codomain, &d.dual) {
        return contract_err("ρ needs a map into the opposite of a downset lattice");
    }
    let n = d.base.size();
    Ok(Relation::from_fn(phi.domain.size(), n, |x, e| d.downsets.masks[phi.values[x]] >> e & 1 == 0))
}

/// `φ_S(x) = {e : (x, e) ∉ S}` for `S = SR`.
pub fn rho_inverse(s: &Relation, d: &DownsetDual) -> Result<LatticeMap> {
    let n = d.base.size();
    if s.cols() != n {
        return dim_err("relation columns differ from |E|");
    }
    if s.compose(d.base.relation())? != *s {
        return contract_err("ρ⁻¹ needs S = SR");
    }
    let values = (0..s.rows())
        .map(|x| {
            let mask = (0..n).filter(|&e| !s.get(x, e)).fold(0u32, |m, e| m | 1 << e);
            d.downsets.index_of(mask).ok_or_else(|| Error::Internal("complement of an up-set is not a down-set".into()))
        })
        .collect::<Result<_>>()?;
    Ok(LatticeMap { domain: GroundSet::new(s.rows()), codomain: d.dual.clone(), values })
}

/// [`rho_iso`] applied termwise.
pub fn rho_free(x: &FreeElt, d: &DownsetDual) -> Result<LinComb<Relation>> {
    let mut out = LinComb::zero();
    for (phi, c) in x.maps() {
        out.add_term(rho_iso(&phi, d)?, c)?;
    }
    Ok(out)
}

/// `Σ_{A ⊆ X} (−1)^{|A|} η_A` with `η_A(i) = lower[i]` on `A` and
/// `upper[i]` off it.
fn signed_eta_sum(codomain: Arc<Lattice>, upper: &[usize], lower: &[usize]) -> Result<FreeElt> {
    let n = upper.len();
    if n > crate::relalg::MAX_DELTA {
        return guard_err(format!("γ needs at most {} points, got {n}", crate::relalg::MAX_DELTA));
    }
    let mut out = FreeElt::zero(n, codomain);
    for mask in 0u32..1 << n {
        let values = (0..n).map(|i| if mask >> i & 1 == 1 { lower[i] } else { upper[i] }).collect();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        out.terms.add_term(values, sign)?;
    }
    Ok(out)
}

/// `γ_T ∈ F_{T^op}(E)` for `T = I↓(E, R)`: `η_A(e)` is `E_{<e}` on `A` and
/// `E_{≤e}` off it.
pub fn gamma(d: &DownsetDual) -> Result<FreeElt> {
    let n = d.base.size();
    let upper = d.downsets.principal.clone();
    let lower = (0..n)
        .map(|e| {
            let m = d.downsets.masks[upper[e]] & !(1 << e);
            d.downsets.index_of(m).ok_or_else(|| Error::Internal("E_{<e} is not a down-set".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    signed_eta_sum(d.dual.clone(), &upper, &lower)
}

/// Meet-irreducible elements of `q`, ascending: `Irr(Q^op)` seen inside `Q`.
pub fn meet_irreducibles(q: &Lattice) -> Vec<usize> {
    (0..q.size()).filter(|&x| q.s(x).is_some()).collect()
}

/// `γ_{Q^op} ∈ F_Q(E^0)` for a distributive `Q`, with `E^0` the
/// meet-irreducibles in ascending order and `η_A(e^0) = s(e^0)` on `A`.
pub fn gamma_op(q: &Arc<Lattice>) -> Result<FreeElt> {
    if !is_distributive(q) {
        return contract_err("γ_{Q^op} needs a distributive lattice");
    }
    let upper = meet_irreducibles(q);
    let lower: Vec<usize> = upper.iter().map(|&e| q.s(e).expect("meet-irreducible")).collect();
    signed_eta_sum(q.clone(), &upper, &lower)
}

/// `ω: E^0 → Q` on a pole lattice: `s(e^0)` on singleton levels, `e^0` on twins.
pub fn omega_map(q: &Arc<Lattice>) -> Result<LatticeMap> {
    let Some(d) = pole_decomposition(q.poset()) else {
        return contract_err("ω needs a pole lattice");
    };
    let mut single = vec![false; q.size()];
    for b in &d.blocks {
        if let Block::Singleton(x) = *b {
            single[x] = true;
        }
    }
    let e0 = meet_irreducibles(q);
    let values = e0.iter().map(|&e| if single[e] { q.s(e).expect("meet-irreducible") } else { e }).collect();
    LatticeMap::new(GroundSet::new(e0.len()), q.clone(), values)
}

/// Number of singleton-block irreducibles of a pole lattice.
pub fn e1_size(q: &Lattice) -> Result<usize> {
    Ok(crate::klin::e1_flags(q)?.into_iter().filter(|&b| b).count())
}

fn map_count(size: usize, m: usize) -> Result<u64> {
    let count = u32::try_from(m).ok().and_then(|m| (size as u64).checked_pow(m));
    match count {
        Some(c) if c <= MAX_MAPS => Ok(c),
        _ => guard_err(format!("{size}^{m} maps exceed the limit {MAX_MAPS}")),
    }
}

/// All maps `X → T` as value vectors in lexicographic order.
pub fn all_maps(size: usize, m: usize) -> Result<Vec<Vec<usize>>> {
    let count = map_count(size, m)?;
    let mut out = Vec::with_capacity(count as usize);
    if size == 0 && m > 0 {
        return Ok(out);
    }
    let mut cur = vec![0usize; m];
    loop {
        out.push(cur.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < size {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// All `φ: X → Q` with `Irr(Q) ⊆ φ(X)`.
pub fn z_basis(q: &Arc<Lattice>, x: &GroundSet) -> Result<Vec<LatticeMap>> {
    let irr = q.irr();
    Ok(all_maps(q.size(), x.size())?
        .into_iter()
        .filter(|v| irr.iter().all(|e| v.contains(e)))
        .map(|values| LatticeMap { domain: x.clone(), codomain: q.clone(), values })
        .collect())
}

/// `Σ_{i=0}^{|E|} (−1)^i C(|E|, i) (|Q| − i)^m` for a pole lattice `Q`.
pub fn rank_sq(q: &Lattice, m: usize) -> Result<i64> {
    if pole_signature(q).is_none() {
        return contract_err("rank formula needs a pole lattice");
    }
    let e = q.irr().len() as i64;
    let exp = u32::try_from(m).map_err(|_| Error::Overflow("rank_sq"))?;
    let mut total: i64 = 0;
    let mut binom: i64 = 1;
    for i in 0..=e {
        let base = q.size() as i64 - i;
        let term = binom.checked_mul(base.checked_pow(exp).ok_or(Error::Overflow("rank_sq"))?).ok_or(Error::Overflow("rank_sq"))?;
        total = if i % 2 == 0 { total.checked_add(term) } else { total.checked_sub(term) }.ok_or(Error::Overflow("rank_sq"))?;
        binom = binom.checked_mul(e - i).ok_or(Error::Overflow("rank_sq"))? / (i + 1);
    }
    Ok(total)
}

/// `F_u(x) = Σ c_f c_φ [f ∘ φ]`.
pub fn apply_linmorph(u: &LinMorph, x: &FreeElt) -> Result<FreeElt> {
    if !same_lattice(u.source(), &x.codomain) {
        return dim_err("linear morphism source differs from the evaluation lattice");
    }
    let terms = x.terms.product(u.terms(), |phi, f| phi.iter().map(|&v| f[v]).collect::<Vec<usize>>())?;
    Ok(FreeElt { domain_size: x.domain_size, codomain: u.target().clone(), terms })
}

/// Ranks behind the comparison of `e_T F_T(X)` with the span of maps
/// whose image is a pole subposet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanRecord {
    pub set_size: usize,
    pub maps: usize,
    pub pole_image_maps: usize,
    pub rank_e_image: usize,
    pub rank_pole_span: usize,
    pub rank_union: usize,
}

impl SpanRecord {
    pub fn passed(&self) -> bool {
        self.rank_e_image == self.rank_pole_span && self.rank_pole_span == self.rank_union
    }
}

pub fn pole_span_check(t: &Arc<Lattice>, x: &GroundSet) -> Result<SpanRecord> {
    pole_span_check_with(t, &e_t(t)?, x)
}

/// [`pole_span_check`] with a precomputed `e_T`.
pub fn pole_span_check_with(t: &Arc<Lattice>, e: &LinMorph, x: &GroundSet) -> Result<SpanRecord> {
    let maps = all_maps(t.size(), x.size())?;
    let images: Vec<LinComb<Vec<usize>>> = maps
        .par_iter()
        .map(|v| {
            let phi = FreeElt { domain_size: x.size(), codomain: t.clone(), terms: LinComb::single(v.clone(), 1) };
            Ok(apply_linmorph(e, &phi)?.terms)
        })
        .collect::<Result<_>>()?;
    let pole: Vec<LinComb<Vec<usize>>> = maps
        .iter()
        .filter(|v| {
            let mut img = v.to_vec();
            img.sort_unstable();
            img.dedup();
            pole_decomposition(&t.poset().induced(&img)).is_some()
        })
        .map(|v| LinComb::single(v.clone(), 1))
        .collect();
    let a: Vec<&LinComb<Vec<usize>>> = images.iter().collect();
    let b: Vec<&LinComb<Vec<usize>>> = pole.iter().collect();
    let both: Vec<&LinComb<Vec<usize>>> = a.iter().chain(&b).copied().collect();
    Ok(SpanRecord {
        set_size: x.size(),
        maps: maps.len(),
        pole_image_maps: pole.len(),
        rank_e_image: rank_of(&a),
        rank_pole_span: rank_of(&b),
        rank_union: rank_of(&both),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klin::{epsilon_q, j_pi};
    use crate::lattice::{lattice_from_poset, PoleSignature};
    use crate::morphism::enumerate_sur;
    use crate::relalg::delta;

    fn sig(v: &[u8]) -> Arc<Lattice> {
        Arc::new(PoleSignature::new(v.to_vec()).unwrap().to_lattice())
    }

    fn map(t: &Arc<Lattice>, v: &[usize]) -> LatticeMap {
        LatticeMap::new(GroundSet::new(v.len()), t.clone(), v.to_vec()).unwrap()
    }

    #[test]
    fn action_examples() {
        let sq = sig(&[1, 2, 1]);
        let phi = map(&sq, &[1, 2]);
        assert_eq!(act_correspondence(&Relation::identity(2), &phi).unwrap(), phi);
        let empty = act_correspondence(&Relation::empty(3, 2), &phi).unwrap();
        assert_eq!(empty.values(), &[0, 0, 0]);
        let one = map(&sq, &[2]);
        assert_eq!(act_correspondence(&Relation::full(1, 1), &one).unwrap().values(), &[2]);
        let both = act_correspondence(&Relation::full(1, 2), &phi).unwrap();
        assert_eq!(both.values(), &[3]);
        assert!(act_correspondence(&Relation::full(1, 3), &phi).is_err());
    }

    #[test]
    fn rho_examples() {
        let d = downset_dual(&Poset::from_relations(2, &[(0, 1)]).unwrap()).unwrap();
        let top_in_t = d.downsets.lattice.top();
        let full = LatticeMap::new(GroundSet::new(3), d.dual.clone(), vec![top_in_t; 3]).unwrap();
        assert!(rho_iso(&full, &d).unwrap().is_empty());
        let none = LatticeMap::new(GroundSet::new(3), d.dual.clone(), vec![0; 3]).unwrap();
        assert_eq!(rho_iso(&none, &d).unwrap(), Relation::full(3, 2));
        let other = map(&sig(&[1, 1, 1]), &[0]);
        assert!(rho_iso(&other, &d).is_err());
    }

    #[test]
    fn rho_round_trip_small() {
        for n in 0..=2 {
            for p in crate::poset::enumerate_posets(n).unwrap() {
                let d = downset_dual(&p).unwrap();
                for xs in 0..=2 {
                    for v in all_maps(d.dual.size(), xs).unwrap() {
                        let phi = LatticeMap::new(GroundSet::new(xs), d.dual.clone(), v).unwrap();
                        let s = rho_iso(&phi, &d).unwrap();
                        assert_eq!(s.compose(p.relation()).unwrap(), s);
                        assert_eq!(rho_inverse(&s, &d).unwrap(), phi);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let d0 = downset_dual(&Poset::antichain(0)).unwrap();
        let g0 = gamma(&d0).unwrap();
        assert_eq!(g0.terms().len(), 1);
        assert_eq!(g0.coeff(&[]), 1);
        let d1 = downset_dual(&Poset::chain(1)).unwrap();
        let g1 = gamma(&d1).unwrap();
        // E_{≤e} is the top of T (index 1), E_{<e} is the bottom (index 0)
        assert_eq!((g1.coeff(&[1]), g1.coeff(&[0])), (1, -1));
        for n in 0..=3 {
            for p in crate::poset::enumerate_posets(n).unwrap() {
                let d = downset_dual(&p).unwrap();
                let g = gamma(&d).unwrap();
                assert_eq!(&rho_free(&g, &d).unwrap(), delta(p.relation()).unwrap().terms());
            }
        }
    }

    #[test]
    fn z_basis_examples() {
        let sq = sig(&[1, 2, 1]);
        let z2 = z_basis(&sq, &GroundSet::new(2)).unwrap();
        let v: Vec<&[usize]> = z2.iter().map(|m| m.values()).collect();
        assert_eq!(v, vec![&[1, 2][..], &[2, 1][..]]);
        assert!(z_basis(&sq, &GroundSet::new(1)).unwrap().is_empty());
        assert_eq!(z_basis(&sig(&[1]), &GroundSet::new(3)).unwrap().len(), 1);
    }

    #[test]
    fn rank_examples() {
        let sq = sig(&[1, 2, 1]);
        assert_eq!(rank_sq(&sq, 2).unwrap(), 2);
        assert_eq!(rank_sq(&sq, 1).unwrap(), 0);
        assert_eq!(rank_sq(&sq, 0).unwrap(), 0);
        assert_eq!(rank_sq(&sig(&[1, 1]), 1).unwrap(), 1);
        assert_eq!(rank_sq(&sig(&[1]), 3).unwrap(), 1);
        for s in PoleSignature::all_up_to(6) {
            let q = Arc::new(s.to_lattice());
            for m in 0..=4 {
                assert_eq!(rank_sq(&q, m).unwrap(), z_basis(&q, &GroundSet::new(m)).unwrap().len() as i64);
            }
        }
    }

    #[test]
    fn linmorph_action() {
        let sq = sig(&[1, 2, 1]);
        let x = FreeElt::from_map(&map(&sq, &[1, 3, 0]), 2);
        assert_eq!(apply_linmorph(&LinMorph::identity(sq.clone()), &x).unwrap(), x);
        let c2 = sig(&[1, 1]);
        for pi in enumerate_sur(&sq, &c2).unwrap() {
            let j = j_pi(&pi).unwrap();
            // misses the irreducible 1 of the chain
            let phi = FreeElt::from_map(&map(&c2, &[0, 0]), 1);
            assert!(apply_linmorph(&j, &phi).unwrap().is_zero());
        }
    }

    #[test]
    fn epsilon_on_omega() {
        for s in PoleSignature::all_up_to(6) {
            let q = Arc::new(s.to_lattice());
            let w = FreeElt::from_map(&omega_map(&q).unwrap(), 1);
            let lhs = apply_linmorph(&epsilon_q(&q).unwrap(), &w).unwrap();
            let sign = if e1_size(&q).unwrap() % 2 == 0 { 1 } else { -1 };
            assert_eq!(lhs, gamma_op(&q).unwrap().scale(sign).unwrap(), "signature {s}");
        }
    }

    #[test]
    fn span_examples() {
        let sq = sig(&[1, 2, 1]);
        let r = pole_span_check(&sq, &GroundSet::new(2)).unwrap();
        assert!(r.passed());
        assert_eq!(r.rank_union, 16);
        let r0 = pole_span_check(&sq, &GroundSet::new(0)).unwrap();
        assert_eq!((r0.maps, r0.rank_union), (1, 1));
        assert!(r0.passed());
        let p = Poset::from_relations(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        let m3 = Arc::new(lattice_from_poset(&p).unwrap());
        let r = pole_span_check(&m3, &GroundSet::new(1)).unwrap();
        assert!(r.passed(), "{r:?}");
        // every single value is a one-point pole subposet
        assert_eq!(r.pole_image_maps, 5);
    }
}
