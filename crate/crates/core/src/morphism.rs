//! Join-morphisms between finite lattices.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{contract_err, dim_err, guard_err, Error, Result};
use crate::lattice::{is_distributive, opposite_lattice, pole_signature, Lattice};
use crate::poset::{pole_decomposition, Block};

/// Largest candidate count `|T|^{|Irr(P)|}` that enumeration will attempt.
pub const MAX_CANDIDATES: f64 = 1e8;

/// A map between lattices preserving `0̂` and binary joins.
#[derive(Clone, Debug)]
pub struct JoinMorphism {
    source: Arc<Lattice>,
    target: Arc<Lattice>,
    map: Vec<usize>,
}

impl PartialEq for JoinMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && same_lattice(&self.source, &other.source) && same_lattice(&self.target, &other.target)
    }
}

impl Eq for JoinMorphism {}

pub(crate) fn same_lattice(a: &Arc<Lattice>, b: &Arc<Lattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn is_join_morphism(source: &Lattice, target: &Lattice, map: &[usize]) -> bool {
    let n = source.size();
    if map.len() != n || map.iter().any(|&y| y >= target.size()) || map[source.bottom()] != target.bottom() {
        return false;
    }
    (0..n).all(|x| (x + 1..n).all(|y| map[source.join(x, y)] == target.join(map[x], map[y])))
}

impl JoinMorphism {
    pub fn new(source: Arc<Lattice>, target: Arc<Lattice>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return dim_err(format!("map has length {}, source has size {}", map.len(), source.size()));
        }
        if !is_join_morphism(&source, &target, &map) {
            return contract_err(format!("{map:?} is not a join-morphism"));
        }
        Ok(JoinMorphism { source, target, map })
    }

    pub(crate) fn new_unchecked(source: Arc<Lattice>, target: Arc<Lattice>, map: Vec<usize>) -> Self {
        debug_assert!(is_join_morphism(&source, &target, &map));
        JoinMorphism { source, target, map }
    }

    pub fn identity(t: Arc<Lattice>) -> Self {
        let map = (0..t.size()).collect();
        JoinMorphism { source: t.clone(), target: t, map }
    }

    pub fn source(&self) -> &Arc<Lattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Lattice> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// `self ∘ f` (apply `f` first).
    pub fn after(&self, f: &JoinMorphism) -> Result<JoinMorphism> {
        if !same_lattice(&f.target, &self.source) {
            return dim_err("composition of morphisms with mismatched lattices");
        }
        Ok(JoinMorphism {
            source: f.source.clone(),
            target: self.target.clone(),
            map: f.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    pub fn is_order_preserving(&self) -> bool {
        let n = self.source.size();
        (0..n).all(|x| self.source.up_set(x).all(|y| self.target.leq(self.map[x], self.map[y])))
    }
}

/// Extends `φ: Irr(P) → T`, given as `values` aligned with `p.irr()`, to
/// `φ̃(x) = ⋁_{e ≤ x} φ(e)`.
pub fn extend_from_irreducibles(p: Arc<Lattice>, t: Arc<Lattice>, values: &[usize]) -> Result<JoinMorphism> {
    let irr = p.irr();
    if values.len() != irr.len() {
        return dim_err(format!("{} values for {} irreducibles", values.len(), irr.len()));
    }
    if values.iter().any(|&v| v >= t.size()) {
        return dim_err("value outside the target lattice");
    }
    if !is_distributive(&p) {
        return contract_err("extension from irreducibles needs a distributive source");
    }
    for (i, &e) in irr.iter().enumerate() {
        for (j, &f) in irr.iter().enumerate() {
            if p.leq(e, f) && !t.leq(values[i], values[j]) {
                return contract_err("map on irreducibles is not order-preserving");
            }
        }
    }
    let map = extend_unchecked(&p, &t, values);
    Ok(JoinMorphism::new_unchecked(p, t, map))
}

pub(crate) fn extend_unchecked(p: &Lattice, t: &Lattice, values: &[usize]) -> Vec<usize> {
    let irr = p.irr();
    (0..p.size())
        .map(|x| t.join_all(irr.iter().zip(values).filter(|(&e, _)| p.leq(e, x)).map(|(_, &v)| v)))
        .collect()
}

/// `f^op(p) = ⋁_{f(t) ≤ p} t`, a join-morphism `P^op → T^op`.
///
/// `p_op` and `t_op` must be the opposites of `f`'s target and source.
pub fn op_morphism_with(f: &JoinMorphism, p_op: Arc<Lattice>, t_op: Arc<Lattice>) -> Result<JoinMorphism> {
    let (t, p) = (&f.source, &f.target);
    if p_op.size() != p.size() || t_op.size() != t.size() || p_op.bottom() != p.top() || t_op.bottom() != t.top() {
        return dim_err("opposite lattices do not match the morphism");
    }
    let map = (0..p.size())
        .map(|y| t.join_all((0..t.size()).filter(|&x| p.leq(f.map[x], y))))
        .collect();
    Ok(JoinMorphism::new_unchecked(p_op, t_op, map))
}

pub fn op_morphism(f: &JoinMorphism) -> JoinMorphism {
    let p_op = Arc::new(opposite_lattice(&f.target));
    let t_op = Arc::new(opposite_lattice(&f.source));
    op_morphism_with(f, p_op, t_op).expect("freshly built opposites match")
}

fn candidate_bound(p: &Lattice, t: &Lattice) -> f64 {
    (t.size() as f64).powi(p.irr().len() as i32)
}

/// All join-morphisms `P → T`, sorted by map.
pub fn enumerate_hom(p: &Arc<Lattice>, t: &Arc<Lattice>) -> Result<Vec<JoinMorphism>> {
    let bound = candidate_bound(p, t);
    if bound > MAX_CANDIDATES {
        return guard_err(format!("{bound:.0} candidate assignments exceed {MAX_CANDIDATES:.0}"));
    }
    // irreducibles in linear-extension order, so every predecessor is
    // assigned before its successors
    let ext = p.linear_extension();
    let irr: Vec<usize> = ext.iter().copied().filter(|&e| p.is_irreducible(e)).collect();
    let k = irr.len();
    let below: Vec<Vec<usize>> = (0..k).map(|i| (0..i).filter(|&j| p.leq(irr[j], irr[i])).collect()).collect();
    let needs_check = !is_distributive(p);
    let ups: Vec<Vec<usize>> = irr.iter().map(|&e| (0..p.size()).filter(|&x| p.leq(e, x)).collect()).collect();

    let first: Vec<usize> = if k == 0 { vec![usize::MAX] } else { (0..t.size()).collect() };
    let chunks: Vec<Vec<Vec<usize>>> = first
        .par_iter()
        .map(|&v0| {
            let mut out = Vec::new();
            let mut vals = vec![0usize; k];
            if k > 0 {
                vals[0] = v0;
            }
            assign(t, &below, &mut vals, k.min(1), &mut |vals| {
                let mut map = vec![t.bottom(); p.size()];
                for (i, &v) in vals.iter().enumerate() {
                    for &x in &ups[i] {
                        map[x] = t.join(map[x], v);
                    }
                }
                if !needs_check || is_join_morphism(p, t, &map) {
                    out.push(map);
                }
            });
            out
        })
        .collect();
    let mut maps: Vec<Vec<usize>> = chunks.into_iter().flatten().collect();
    maps.sort();
    Ok(maps.into_iter().map(|m| JoinMorphism::new_unchecked(p.clone(), t.clone(), m)).collect())
}

fn assign(t: &Lattice, below: &[Vec<usize>], vals: &mut [usize], i: usize, emit: &mut dyn FnMut(&[usize])) {
    if i == vals.len() {
        emit(vals);
        return;
    }
    for v in 0..t.size() {
        if below[i].iter().all(|&j| t.leq(vals[j], v)) {
            vals[i] = v;
            assign(t, below, vals, i + 1, emit);
        }
    }
}

pub fn enumerate_inj(p: &Arc<Lattice>, t: &Arc<Lattice>) -> Result<Vec<JoinMorphism>> {
    Ok(enumerate_hom(p, t)?.into_iter().filter(JoinMorphism::is_injective).collect())
}

pub fn enumerate_sur(t: &Arc<Lattice>, p: &Arc<Lattice>) -> Result<Vec<JoinMorphism>> {
    if p.size() > t.size() {
        return Ok(Vec::new());
    }
    Ok(enumerate_hom(t, p)?.into_iter().filter(JoinMorphism::is_surjective).collect())
}

/// The map `λ ↦ λ̃` from injective join-morphisms `P → T` (P a pole lattice)
/// to injective join-morphisms `P^op → T^op`, with the same underlying map
/// on elements. `p_op`, `t_op` are the opposite lattices.
pub fn omega_with(lambda: &JoinMorphism, p_op: Arc<Lattice>, t_op: Arc<Lattice>) -> Result<JoinMorphism> {
    let p = &lambda.source;
    let t = &lambda.target;
    if pole_signature(p).is_none() {
        return contract_err("source of omega must be a pole lattice");
    }
    if !lambda.is_injective() {
        return contract_err("omega needs an injective morphism");
    }
    if p_op.size() != p.size() || t_op.size() != t.size() || p_op.bottom() != p.top() || t_op.bottom() != t.top() {
        return dim_err("opposite lattices do not match the morphism");
    }
    let blocks = pole_decomposition(p.poset()).expect("pole lattice").blocks;
    let lam = &lambda.map;
    let mut out = lam.clone();
    let mut run: Vec<usize> = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        match *b {
            Block::Singleton(x) => {
                run.push(x);
                if i + 1 < blocks.len() {
                    continue;
                }
                // top interval [v_n, 1̂]
                fill_interval(&run, lam, t.top(), &mut out);
            }
            Block::TwinPair(a, a2) => {
                fill_interval(&run, lam, t.meet(lam[a], lam[a2]), &mut out);
                run.clear();
            }
        }
    }
    if !is_join_morphism(&p_op, &t_op, &out) {
        return Err(Error::Internal(format!("omega produced {out:?}, not a meet-morphism")));
    }
    Ok(JoinMorphism::new_unchecked(p_op, t_op, out))
}

// One totally ordered interval [v, w], listed ascending: copy λ when
// λ(w) already equals the cap, otherwise shift up and put the cap on w.
fn fill_interval(run: &[usize], lam: &[usize], cap: usize, out: &mut [usize]) {
    let w = *run.last().expect("pole intervals are nonempty");
    if lam[w] == cap {
        return;
    }
    for k in 0..run.len() - 1 {
        out[run[k]] = lam[run[k + 1]];
    }
    out[w] = cap;
}

pub fn omega(lambda: &JoinMorphism) -> Result<JoinMorphism> {
    let p_op = Arc::new(opposite_lattice(&lambda.source));
    let t_op = Arc::new(opposite_lattice(&lambda.target));
    omega_with(lambda, p_op, t_op)
}

/// Pairs each `λ ∈ Inj(P, T)` with `Ω(λ)^op ∈ Sur(T, P)`; fails if the
/// pairing is not a bijection.
pub fn inj_sur_bijection(p: &Arc<Lattice>, t: &Arc<Lattice>) -> Result<Vec<(JoinMorphism, JoinMorphism)>> {
    let p_op = Arc::new(opposite_lattice(p));
    let t_op = Arc::new(opposite_lattice(t));
    let inj = enumerate_inj(p, t)?;
    let sur = enumerate_sur(t, p)?;
    let mut pairs = Vec::with_capacity(inj.len());
    for l in inj {
        let tilde = omega_with(&l, p_op.clone(), t_op.clone())?;
        let s = op_morphism_with(&tilde, t.clone(), p.clone())?;
        pairs.push((l, s));
    }
    let mut images: Vec<&[usize]> = pairs.iter().map(|(_, s)| s.map()).collect();
    images.sort();
    let expected: Vec<&[usize]> = sur.iter().map(JoinMorphism::map).collect();
    if images != expected {
        return Err(Error::Internal("Inj/Sur pairing is not a bijection".into()));
    }
    Ok(pairs)
}
