//! The algebra of relations on a finite set: the element `δ`, its product
//! identities, and the action on the permutation-indexed fundamental module.

use crate::error::{contract_err, dim_err, guard_err, Error, Result};
use crate::lincomb::LinComb;
use crate::poset::{pole_decomposition, Block, Poset};
use crate::relation::{Permutation, Relation};

/// Largest ground set for which `δ` (with `2^|E|` terms) is built.
pub const MAX_DELTA: usize = 12;

/// Largest ground set for the exhaustive `δ S δ` search.
pub const MAX_NONZERO_SEARCH: usize = 4;

/// `Σ c_S [S]` over relations on a fixed set of size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelLinComb {
    n: usize,
    terms: LinComb<Relation>,
}

impl RelLinComb {
    pub fn zero(n: usize) -> Self {
        RelLinComb { n, terms: LinComb::zero() }
    }

    pub fn single(s: Relation, c: i64) -> Result<Self> {
        if !s.is_square() {
            return dim_err("relations on E must be square");
        }
        Ok(RelLinComb { n: s.rows(), terms: LinComb::single(s, c) })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &LinComb<Relation> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, s: &Relation) -> i64 {
        self.terms.coeff(s)
    }

    pub fn add(&self, other: &RelLinComb) -> Result<RelLinComb> {
        if self.n != other.n {
            return dim_err("relation combinations on different sets");
        }
        Ok(RelLinComb { n: self.n, terms: self.terms.add(&other.terms)? })
    }

    pub fn scale(&self, c: i64) -> Result<RelLinComb> {
        Ok(RelLinComb { n: self.n, terms: self.terms.scale(c)? })
    }
}

/// Bilinear extension of relation composition.
pub fn rel_product(u: &RelLinComb, v: &RelLinComb) -> Result<RelLinComb> {
    if u.n != v.n {
        return dim_err("relation combinations on different sets");
    }
    let terms = u.terms.product(&v.terms, |s, t| s.compose(t).expect("square relations of equal size"))?;
    Ok(RelLinComb { n: u.n, terms })
}

fn check_order(r: &Relation) -> Result<()> {
    if !r.is_order() {
        return contract_err("expected an order relation");
    }
    Ok(())
}

/// `δ = Σ_{A ⊆ E} (−1)^{|A|} (R̄^op ∪ Δ_A)`.
pub fn delta(r: &Relation) -> Result<RelLinComb> {
    check_order(r)?;
    let n = r.rows();
    if n > MAX_DELTA {
        return guard_err(format!("δ needs |E| <= {MAX_DELTA}, got {n}"));
    }
    let rbar_op = r.complement()?.opposite();
    let mut out = RelLinComb::zero(n);
    for mask in 0u32..1 << n {
        let a = Relation::diagonal(n, (0..n).filter(|&i| mask >> i & 1 == 1));
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        out.terms.add_term(rbar_op.union(&a)?, sign)?;
    }
    Ok(out)
}

/// For `S = SR`, returns `σ` with `S = Δ_σ R` when one exists.
pub fn s_delta_classify(s: &Relation, r: &Relation) -> Result<Option<Permutation>> {
    check_order(r)?;
    if s.rows() != r.rows() || !s.is_square() {
        return dim_err("S and R must live on the same set");
    }
    if s.compose(r)? != *s {
        return contract_err("s_delta_classify needs S = SR");
    }
    let n = r.rows();
    // Δ_σ R has row σ(x) equal to row x of R; rows of R are pairwise distinct.
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (x, slot) in image.iter_mut().enumerate() {
        let Some(y) = (0..n).find(|&y| s.row_words(y) == r.row_words(x)) else {
            return Ok(None);
        };
        if used[y] {
            return Ok(None);
        }
        used[y] = true;
        *slot = y;
    }
    Ok(Some(Permutation::new(image)?))
}

/// Outcome of the `δ²` computation on a pole poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSquareRecord {
    pub e1_size: usize,
    pub tau: Permutation,
    /// `δ² = (−1)^{|E_1|} Δ_τ δ`.
    pub square_matches: bool,
    /// `((−1)^{|E_1|} Δ_τ δ)² = (−1)^{|E_1|} Δ_τ δ`.
    pub idempotent: bool,
}

impl DeltaSquareRecord {
    pub fn passed(&self) -> bool {
        self.square_matches && self.idempotent
    }
}

pub fn delta_square_identity(r: &Relation) -> Result<DeltaSquareRecord> {
    let p = Poset::new(r.clone())?;
    let Some(d) = pole_decomposition(&p) else {
        return contract_err("δ² identity needs a pole poset");
    };
    let e1_size = d.blocks.iter().filter(|b| matches!(b, Block::Singleton(_))).count();
    let tau = d.twin_swap();
    let dl = delta(r)?;
    let sq = rel_product(&dl, &dl)?;
    let sign = if e1_size % 2 == 0 { 1 } else { -1 };
    let e = rel_product(&RelLinComb::single(tau.delta(), sign)?, &dl)?;
    Ok(DeltaSquareRecord {
        e1_size,
        tau,
        square_matches: sq == e,
        idempotent: rel_product(&e, &e)? == e,
    })
}

/// All `S` with `S = SR`: every row is an up-set of `R`.
pub fn right_invariant_relations(r: &Relation) -> Vec<Relation> {
    let n = r.rows();
    let upsets: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|&m| (0..n).all(|x| m >> x & 1 == 0 || r.row_iter(x).all(|y| m >> y & 1 == 1)))
        .map(|m| (0..n).filter(|&x| m >> x & 1 == 1).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let mut s = Relation::empty(n, n);
        for (y, &c) in choice.iter().enumerate() {
            for &x in &upsets[c] {
                s.set(y, x, true);
            }
        }
        out.push(s);
        let mut i = 0;
        while i < n {
            choice[i] += 1;
            if choice[i] < upsets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// Is there a relation `S` with `δ S δ ≠ 0`? Only `S = SR` is searched,
/// which loses nothing since `S δ = S R δ`.
pub fn nonzero_condition(r: &Relation) -> Result<bool> {
    check_order(r)?;
    let n = r.rows();
    if n > MAX_NONZERO_SEARCH {
        return guard_err(format!("δSδ search needs |E| <= {MAX_NONZERO_SEARCH}, got {n}"));
    }
    let dl = delta(r)?;
    for s in right_invariant_relations(r) {
        let sd = rel_product(&RelLinComb::single(s, 1)?, &dl)?;
        if sd.is_zero() {
            continue;
        }
        if !rel_product(&dl, &sd)?.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `Σ c_σ Δ_σ f_R` in the fundamental module of `(E, R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundModuleElement {
    n: usize,
    terms: LinComb<Permutation>,
}

impl FundModuleElement {
    pub fn zero(n: usize) -> Self {
        FundModuleElement { n, terms: LinComb::zero() }
    }

    /// `c Δ_σ f_R`.
    pub fn basis(sigma: Permutation, c: i64) -> Self {
        FundModuleElement { n: sigma.len(), terms: LinComb::single(sigma, c) }
    }

    pub fn terms(&self) -> &LinComb<Permutation> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }
}

/// The unique `τ` with `Δ_E ⊆ Δ_{τ⁻¹} Q ⊆ Δ_σ R Δ_{σ⁻¹}`, if any.
pub fn fund_module_tau(q: &Relation, sigma: &Permutation, r: &Relation) -> Result<Option<Permutation>> {
    let n = r.rows();
    if q.rows() != n || !q.is_square() || sigma.len() != n {
        return dim_err("Q, σ and R must live on the same set");
    }
    let conj = sigma.delta().compose(r)?.compose(&sigma.inverse().delta())?;
    // row z of Δ_{τ⁻¹}Q is row τ(z) of Q
    let cand: Vec<Vec<usize>> = (0..n)
        .map(|z| (0..n).filter(|&y| q.get(y, z) && q.row_subset(y, &conj, z)).collect())
        .collect();
    let mut sols = Vec::new();
    let mut image = vec![0usize; n];
    let mut used = vec![false; n];
    collect_perms(&cand, 0, &mut image, &mut used, &mut sols);
    match sols.len() {
        0 => Ok(None),
        1 => Ok(Some(Permutation::new(sols.pop().unwrap())?)),
        k => Err(Error::Internal(format!("{k} permutations satisfy the module action condition"))),
    }
}

fn collect_perms(cand: &[Vec<usize>], z: usize, image: &mut [usize], used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    if z == cand.len() {
        out.push(image.to_vec());
        return;
    }
    for &y in &cand[z] {
        if !used[y] {
            used[y] = true;
            image[z] = y;
            collect_perms(cand, z + 1, image, used, out);
            used[y] = false;
        }
    }
}

/// `Q · x` extended linearly over the basis `Δ_σ f_R`.
pub fn fund_module_act(q: &Relation, x: &FundModuleElement, r: &Relation) -> Result<FundModuleElement> {
    check_order(r)?;
    if x.n != r.rows() {
        return dim_err("module element over a different set");
    }
    let mut out = FundModuleElement::zero(x.n);
    for (sigma, c) in x.terms.iter() {
        if let Some(tau) = fund_module_tau(q, sigma, r)? {
            out.terms.add_term(tau.compose(sigma), c)?;
        }
    }
    Ok(out)
}

/// Totally ordered, or a pole poset with `char ≠ 2`.
pub fn is_simple_projective(r: &Relation, characteristic: u64) -> Result<bool> {
    let p = Poset::new(r.clone())?;
    Ok(p.is_chain() || (characteristic != 2 && pole_decomposition(&p).is_some()))
}
