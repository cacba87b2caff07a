//! Integer linear combinations of join-morphisms and the idempotents built
//! from Möbius-weighted sums of them.

use std::sync::Arc;

use crate::decompose::{orbit_reps, pol_t_lattices};
use crate::error::{contract_err, dim_err, guard_err, Error, Result};
use crate::lattice::{pole_signature, Lattice};
use crate::lincomb::LinComb;
use crate::morphism::{extend_unchecked, same_lattice, JoinMorphism};
use crate::poset::{pole_decomposition, Block};

/// Largest number of families `A` summed in one `j^π`.
pub const MAX_FAMILIES: u64 = 10_000_000;

/// `Σ c_f f` over join-morphisms `source → target`, keyed by their maps.
#[derive(Clone, Debug)]
pub struct LinMorph {
    source: Arc<Lattice>,
    target: Arc<Lattice>,
    terms: LinComb<Vec<usize>>,
}

impl PartialEq for LinMorph {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && same_lattice(&self.source, &other.source)
            && same_lattice(&self.target, &other.target)
    }
}

impl Eq for LinMorph {}

impl LinMorph {
    pub fn zero(source: Arc<Lattice>, target: Arc<Lattice>) -> Self {
        LinMorph { source, target, terms: LinComb::zero() }
    }

    pub fn from_morphism(f: &JoinMorphism, c: i64) -> Self {
        LinMorph {
            source: f.source().clone(),
            target: f.target().clone(),
            terms: LinComb::single(f.map().to_vec(), c),
        }
    }

    pub fn identity(t: Arc<Lattice>) -> Self {
        LinMorph::from_morphism(&JoinMorphism::identity(t), 1)
    }

    /// Builds from raw maps; each map must be a join-morphism.
    pub fn from_terms(source: Arc<Lattice>, target: Arc<Lattice>, terms: LinComb<Vec<usize>>) -> Result<Self> {
        for m in terms.keys() {
            if !crate::morphism::is_join_morphism(&source, &target, m) {
                return contract_err(format!("{m:?} is not a join-morphism"));
            }
        }
        Ok(LinMorph { source, target, terms })
    }

    pub fn source(&self) -> &Arc<Lattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Lattice> {
        &self.target
    }

    pub fn terms(&self) -> &LinComb<Vec<usize>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, map: &[usize]) -> i64 {
        self.terms.coeff(&map.to_vec())
    }

    /// Terms as join-morphisms with their coefficients.
    pub fn morphisms(&self) -> impl Iterator<Item = (JoinMorphism, i64)> + '_ {
        self.terms.iter().map(|(m, c)| {
            (JoinMorphism::new_unchecked(self.source.clone(), self.target.clone(), m.clone()), c)
        })
    }

    fn check_shape(&self, other: &LinMorph) -> Result<()> {
        if !same_lattice(&self.source, &other.source) || !same_lattice(&self.target, &other.target) {
            return dim_err("linear combinations over different lattices");
        }
        Ok(())
    }

    pub fn add(&self, other: &LinMorph) -> Result<LinMorph> {
        self.check_shape(other)?;
        Ok(LinMorph { terms: self.terms.add(&other.terms)?, ..self.clone() })
    }

    pub fn sub(&self, other: &LinMorph) -> Result<LinMorph> {
        self.check_shape(other)?;
        Ok(LinMorph { terms: self.terms.sub(&other.terms)?, ..self.clone() })
    }

    pub fn scale(&self, c: i64) -> Result<LinMorph> {
        Ok(LinMorph { terms: self.terms.scale(c)?, ..self.clone() })
    }

    pub fn reduce_mod(&self, m: i64) -> Result<LinMorph> {
        Ok(LinMorph { terms: self.terms.reduce_mod(m)?, ..self.clone() })
    }
}

/// `u ∘ v`, applying `v` first.
pub fn lin_compose(u: &LinMorph, v: &LinMorph) -> Result<LinMorph> {
    if !same_lattice(&v.target, &u.source) {
        return dim_err("composition of linear morphisms with mismatched lattices");
    }
    let terms = v.terms.product(&u.terms, |f, g| f.iter().map(|&x| g[x]).collect::<Vec<usize>>())?;
    Ok(LinMorph { source: v.source.clone(), target: u.target.clone(), terms })
}

/// Irreducibles of a pole lattice split into singleton-block members (`E_1`)
/// and twins (`E_2`), as a flag per entry of `p.irr()`.
pub(crate) fn e1_flags(p: &Lattice) -> Result<Vec<bool>> {
    let Some(d) = pole_decomposition(p.poset()) else {
        return contract_err("expected a pole lattice");
    };
    let mut single = vec![false; p.size()];
    for b in &d.blocks {
        if let Block::Singleton(x) = *b {
            single[x] = true;
        }
    }
    Ok(p.irr().iter().map(|&e| single[e]).collect())
}

/// The elements `b_p = sup π⁻¹(p)` and the interval ends `b_e^-`, `b_e^+`
/// for a surjection `π: T → P` onto a pole lattice.
#[derive(Clone, Debug)]
pub struct BFamily {
    pub pi: JoinMorphism,
    /// `b_p` indexed by `p ∈ P`.
    pub b: Vec<usize>,
    /// `E = Irr(P)`, ascending.
    pub irr: Vec<usize>,
    /// Whether each member of `irr` lies in `E_1`.
    pub in_e1: Vec<bool>,
    pub b_minus: Vec<usize>,
    pub b_plus: Vec<usize>,
}

impl BFamily {
    pub fn e1_count(&self) -> usize {
        self.in_e1.iter().filter(|&&b| b).count()
    }
}

pub fn b_family(pi: &JoinMorphism) -> Result<BFamily> {
    if !pi.is_surjective() {
        return contract_err("b_family needs a surjective morphism");
    }
    let (t, p) = (pi.source(), pi.target());
    let in_e1 = e1_flags(p)?;
    let b: Vec<usize> = (0..p.size()).map(|y| t.join_all((0..t.size()).filter(|&x| pi.apply(x) == y))).collect();
    let irr = p.irr().to_vec();
    let mut b_minus = Vec::with_capacity(irr.len());
    let mut b_plus = Vec::with_capacity(irr.len());
    for (&e, &one) in irr.iter().zip(&in_e1) {
        if one {
            b_minus.push(b[p.r(e).expect("irreducible")]);
            b_plus.push(b[e]);
        } else {
            b_minus.push(b[e]);
            b_plus.push(b[p.s(e).ok_or_else(|| Error::Internal("twin without upper cover".into()))?]);
        }
    }
    Ok(BFamily { pi: pi.clone(), b, irr, in_e1, b_minus, b_plus })
}

/// A choice `a_e ∈ [b_e^-, b_e^+]` for each `e ∈ E`, aligned with `BFamily::irr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyA {
    pub a: Vec<usize>,
}

/// The join-morphism `P → T` extending `e ↦ a_e`.
pub fn j_a(bf: &BFamily, fam: &FamilyA) -> Result<JoinMorphism> {
    let (t, p) = (bf.pi.source(), bf.pi.target());
    if fam.a.len() != bf.irr.len() {
        return dim_err("family length differs from |Irr(P)|");
    }
    for (i, &a) in fam.a.iter().enumerate() {
        if a >= t.size() || !t.leq(bf.b_minus[i], a) || !t.leq(a, bf.b_plus[i]) {
            return contract_err(format!("a_e = {a} outside [b_e^-, b_e^+] for e = {}", bf.irr[i]));
        }
    }
    Ok(JoinMorphism::new_unchecked(p.clone(), t.clone(), extend_unchecked(p, t, &fam.a)))
}

/// `j^π = (−1)^{|E_1|} Σ_A μ(B^-, A) j_A^π`.
pub fn j_pi(pi: &JoinMorphism) -> Result<LinMorph> {
    let bf = b_family(pi)?;
    let (t, p) = (pi.source(), pi.target());
    let intervals: Vec<Vec<(usize, i64)>> = bf
        .b_minus
        .iter()
        .zip(&bf.b_plus)
        .map(|(&lo, &hi)| {
            t.interval(lo, hi)
                .into_iter()
                .map(|a| Ok((a, t.mobius(lo, a)?)))
                .filter(|r| !matches!(r, Ok((_, 0))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let count = intervals.iter().try_fold(1u64, |acc, iv| acc.checked_mul(iv.len() as u64));
    if count.is_none_or(|c| c > MAX_FAMILIES) {
        return guard_err("too many families in the j^π sum");
    }
    let sign: i64 = if bf.e1_count() % 2 == 0 { 1 } else { -1 };
    let mut terms = LinComb::zero();
    let k = intervals.len();
    let mut idx = vec![0usize; k];
    if intervals.iter().all(|iv| !iv.is_empty()) {
        loop {
            let a: Vec<usize> = (0..k).map(|i| intervals[i][idx[i]].0).collect();
            let coeff = (0..k).try_fold(sign, |acc, i| acc.checked_mul(intervals[i][idx[i]].1));
            let coeff = coeff.ok_or(Error::Overflow("j_pi"))?;
            terms.add_term(extend_unchecked(p, t, &a), coeff)?;
            // mixed-radix increment
            let mut i = 0;
            while i < k {
                idx[i] += 1;
                if idx[i] < intervals[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    Ok(LinMorph { source: p.clone(), target: t.clone(), terms })
}

/// `ρ_Y`: fixes `Y`, sends `e ∈ E_1 − Y` to `r(e)` and `e ∈ E_2 − Y` to `s(e)`.
pub fn rho_y(p: &Arc<Lattice>, y: &[usize]) -> Result<JoinMorphism> {
    let in_e1 = e1_flags(p)?;
    let irr = p.irr();
    if let Some(&bad) = y.iter().find(|e| !irr.contains(e)) {
        return contract_err(format!("{bad} is not irreducible"));
    }
    let values: Vec<usize> = irr
        .iter()
        .zip(&in_e1)
        .map(|(&e, &one)| {
            if y.contains(&e) {
                e
            } else if one {
                p.r(e).expect("irreducible")
            } else {
                p.s(e).expect("twins have an upper cover")
            }
        })
        .collect();
    Ok(JoinMorphism::new_unchecked(p.clone(), p.clone(), extend_unchecked(p, p, &values)))
}

/// `Σ_{Y ⊆ E} (−1)^{|E−Y|} ρ_Y`.
pub fn rho_sum(p: &Arc<Lattice>) -> Result<LinMorph> {
    let irr = p.irr().to_vec();
    let k = irr.len();
    if k > 20 {
        return guard_err("too many irreducibles for the ρ_Y sum");
    }
    let mut out = LinMorph::zero(p.clone(), p.clone());
    for mask in 0u32..1 << k {
        let y: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| irr[i]).collect();
        let sign = if (k - y.len()) % 2 == 0 { 1 } else { -1 };
        out.terms.add_term(rho_y(p, &y)?.into_map(), sign)?;
    }
    Ok(out)
}

/// `f_{χ,τ,θ} = j^χ τ θ` for surjections `χ, θ: T → P` and `τ ∈ Aut(P)`.
pub fn f_general(chi: &JoinMorphism, tau: &JoinMorphism, theta: &JoinMorphism) -> Result<LinMorph> {
    f_general_with(&j_pi(chi)?, tau, theta)
}

/// [`f_general`] with a precomputed `j^χ`.
pub fn f_general_with(j_chi: &LinMorph, tau: &JoinMorphism, theta: &JoinMorphism) -> Result<LinMorph> {
    let p = j_chi.source();
    if !same_lattice(theta.target(), p) || !same_lattice(tau.source(), p) || !same_lattice(tau.target(), p) {
        return dim_err("χ, τ and θ must share the pole lattice P");
    }
    if !tau.is_injective() {
        return contract_err("τ must be an automorphism");
    }
    let tt = tau.after(theta)?;
    lin_compose(j_chi, &LinMorph::from_morphism(&tt, 1))
}

/// `f_{π,id,π} = j^π π`.
pub fn f_idem(pi: &JoinMorphism) -> Result<LinMorph> {
    f_general(pi, &JoinMorphism::identity(pi.target().clone()), pi)
}

/// `e_T = Σ_{P ∈ Pol_T} Σ_{π} f_{π,id,π}` over orbit representatives.
pub fn e_t(t: &Arc<Lattice>) -> Result<LinMorph> {
    let mut out = LinMorph::zero(t.clone(), t.clone());
    for (_, p) in pol_t_lattices(t)? {
        for pi in orbit_reps(t, &p)? {
            out = out.add(&f_idem(&pi)?)?;
        }
    }
    Ok(out)
}

/// `β_{Q,P} = Σ_π f_{π,id,π}` over orbit representatives of `Sur(Q, P)`.
pub fn beta(q: &Arc<Lattice>, p: &Arc<Lattice>) -> Result<LinMorph> {
    if pole_signature(q).is_none() || pole_signature(p).is_none() {
        return contract_err("β needs pole lattices");
    }
    let mut out = LinMorph::zero(q.clone(), q.clone());
    for pi in orbit_reps(q, p)? {
        out = out.add(&f_idem(&pi)?)?;
    }
    Ok(out)
}

/// `ε_Q = j^{id_Q}`.
pub fn epsilon_q(q: &Arc<Lattice>) -> Result<LinMorph> {
    if pole_signature(q).is_none() {
        return contract_err("ε needs a pole lattice");
    }
    j_pi(&JoinMorphism::identity(q.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::PoleSignature;
    use crate::morphism::enumerate_sur;

    fn sig(v: &[u8]) -> Arc<Lattice> {
        Arc::new(PoleSignature::new(v.to_vec()).unwrap().to_lattice())
    }

    fn mor(s: &Arc<Lattice>, t: &Arc<Lattice>, m: &[usize]) -> JoinMorphism {
        JoinMorphism::new(s.clone(), t.clone(), m.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let sq = sig(&[1, 2, 1]);
        let f = LinMorph::from_morphism(&mor(&sq, &sq, &[0, 0, 3, 3]), 2);
        let g = LinMorph::from_morphism(&mor(&sq, &sq, &[0, 1, 1, 1]), 3);
        let id = LinMorph::identity(sq.clone());
        assert_eq!(lin_compose(&f, &id).unwrap(), f);
        let fg = lin_compose(&f, &g).unwrap();
        assert_eq!(fg.coeff(&[0, 0, 0, 0]), 6);
        assert_eq!(fg.len(), 1);
        // (f − g)∘h with f∘h = g∘h
        let h = LinMorph::from_morphism(&mor(&sq, &sq, &[0, 0, 0, 0]), 1);
        let d = f.scale(3).unwrap().sub(&g.scale(2).unwrap()).unwrap();
        assert!(lin_compose(&d, &h).unwrap().is_zero());
    }

    #[test]
    fn b_family_examples() {
        let sq = sig(&[1, 2, 1]);
        let c2 = sig(&[1, 1]);
        let both = mor(&sq, &c2, &[0, 1, 1, 1]);
        let bf = b_family(&both).unwrap();
        assert_eq!(bf.b, vec![0, 3]);
        assert_eq!((bf.b_minus.clone(), bf.b_plus.clone()), (vec![0], vec![3]));
        let one_zero = mor(&sq, &c2, &[0, 1, 0, 1]);
        assert_eq!(b_family(&one_zero).unwrap().b, vec![2, 3]);
        let id = b_family(&JoinMorphism::identity(sq.clone())).unwrap();
        assert_eq!(id.b, vec![0, 1, 2, 3]);
        // twins: b^- = b_e, b^+ = b_{s(e)}
        assert_eq!((id.b_minus, id.b_plus), (vec![1, 2], vec![3, 3]));
        assert!(b_family(&mor(&sq, &c2, &[0, 0, 0, 0])).is_err());
    }

    #[test]
    fn j_a_examples() {
        let c3 = sig(&[1, 1, 1]);
        let bf = b_family(&JoinMorphism::identity(c3.clone())).unwrap();
        let up = j_a(&bf, &FamilyA { a: bf.b_plus.clone() }).unwrap();
        assert_eq!(up.map(), &[0, 1, 2]);
        let down = j_a(&bf, &FamilyA { a: bf.b_minus.clone() }).unwrap();
        assert_eq!(down.map(), &[0, 0, 1]);
        assert!(j_a(&bf, &FamilyA { a: vec![2, 2] }).is_err());
    }

    #[test]
    fn j_pi_examples() {
        let sq = sig(&[1, 2, 1]);
        let c2 = sig(&[1, 1]);
        let j = j_pi(&mor(&sq, &c2, &[0, 1, 1, 1])).unwrap();
        // −(j_0 − j_a − j_b + j_1) where j_x sends 1̂ to x
        let expect: LinComb<Vec<usize>> =
            [(vec![0, 0], -1), (vec![0, 1], 1), (vec![0, 2], 1), (vec![0, 3], -1)].into_iter().collect();
        assert_eq!(j.terms(), &expect);
        let c1 = sig(&[1]);
        let only = j_pi(&mor(&sq, &c1, &[0, 0, 0, 0])).unwrap();
        assert_eq!(only.terms(), &LinComb::single(vec![0], 1));
    }

    #[test]
    fn rho_examples() {
        let c2 = sig(&[1, 1]);
        assert_eq!(rho_y(&c2, &[1]).unwrap().map(), &[0, 1]);
        assert_eq!(rho_y(&c2, &[]).unwrap().map(), &[0, 0]);
        let sq = sig(&[1, 2, 1]);
        assert_eq!(rho_y(&sq, &[]).unwrap().map(), &[0, 3, 3, 3]);
        assert!(rho_y(&sq, &[3]).is_err());
    }

    #[test]
    fn epsilon_examples() {
        let c2 = sig(&[1, 1]);
        let eps = epsilon_q(&c2).unwrap();
        let expect: LinComb<Vec<usize>> = [(vec![0, 1], 1), (vec![0, 0], -1)].into_iter().collect();
        assert_eq!(eps.terms(), &expect);
        let c1 = sig(&[1]);
        assert_eq!(e_t(&c1).unwrap(), LinMorph::identity(c1.clone()));
        for s in PoleSignature::all_up_to(5) {
            let q = Arc::new(s.to_lattice());
            assert_eq!(epsilon_q(&q).unwrap(), rho_sum(&q).unwrap(), "{s}");
        }
    }

    #[test]
    fn idempotent_on_square() {
        let sq = sig(&[1, 2, 1]);
        let c2 = sig(&[1, 1]);
        for pi in enumerate_sur(&sq, &c2).unwrap() {
            let f = f_idem(&pi).unwrap();
            assert_eq!(lin_compose(&f, &f).unwrap(), f);
        }
    }

    #[test]
    fn betas_sum_to_identity() {
        let q = sig(&[1, 2, 1, 1]);
        let mut total = LinMorph::zero(q.clone(), q.clone());
        for (_, p) in pol_t_lattices(&q).unwrap() {
            total = total.add(&beta(&q, &p).unwrap()).unwrap();
        }
        assert_eq!(total, LinMorph::identity(q.clone()));
        assert_eq!(e_t(&q).unwrap(), LinMorph::identity(q));
    }
}
