//! Executable identity families over a lattice or over the small-poset
//! corpus, reported as data rather than panics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{aut_morphisms, decomposition_report, orbit_reps, pol_t_lattices};
use crate::error::{Error, Result};
use crate::functor::{
    apply_linmorph, downset_dual, e1_size, gamma, gamma_op, omega_map, pole_span_check_with, rank_sq, rho_free,
    z_basis, FreeElt,
};
use crate::klin::{beta, e_t, epsilon_q, f_general_with, j_pi, lin_compose, rho_sum, LinMorph};
use crate::lattice::{opposite_lattice, pole_signature, Lattice, PoleSignature};
use crate::linalg::rank_of;
use crate::morphism::{enumerate_hom, enumerate_inj, enumerate_sur, omega, op_morphism, op_morphism_with, JoinMorphism};
use crate::poset::{enumerate_posets, is_pole_by_permutation, naturally_labeled, pole_decomposition, Poset};
use crate::relalg::{delta, delta_square_identity, nonzero_condition, rel_product, s_delta_classify, RelLinComb};
use crate::relation::GroundSet;

/// Identity families runnable on one lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Idempotents,
    Orthogonality,
    Centrality,
    Epsilon,
    Independence,
    Span,
    Opposites,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] =
        ["idempotents", "orthogonality", "centrality", "epsilon", "independence", "span", "opposites", "all"];

    fn members(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Idempotents, Orthogonality, Centrality, Epsilon, Independence, Span, Opposites],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        use Suite::*;
        Ok(match s {
            "idempotents" => Idempotents,
            "orthogonality" => Orthogonality,
            "centrality" => Centrality,
            "epsilon" => Epsilon,
            "independence" => Independence,
            "span" => Span,
            "opposites" => Opposites,
            "all" => All,
            _ => return Err(Error::Domain(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", ")))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = Suite::NAMES.iter().position(|n| n.parse::<Suite>().ok() == Some(*self)).expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

/// One checked identity. `anchor` names the formula being checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckRecord {
    fn new(name: impl Into<String>, anchor: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckRecord { name: name.into(), anchor: anchor.to_string(), passed, detail: detail.into() }
    }

    fn from_result(name: impl Into<String>, anchor: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => CheckRecord::new(name, anchor, passed, detail),
            Err(e) => CheckRecord::new(name, anchor, false, format!("error: {e}")),
        }
    }
}

/// Data for one `P ∈ Pol_T`.
#[derive(Clone, Debug)]
pub struct PoleBlock {
    pub signature: PoleSignature,
    pub lattice: Arc<Lattice>,
    pub reps: Vec<JoinMorphism>,
    pub j: Vec<LinMorph>,
    pub aut: Vec<JoinMorphism>,
}

/// One `f_{χ,τ,θ}` with indices into its [`PoleBlock`].
#[derive(Clone, Debug)]
pub struct FElement {
    pub block: usize,
    pub chi: usize,
    pub tau: usize,
    pub theta: usize,
    pub value: LinMorph,
}

/// All elements `f_{χ,τ,θ}` for a lattice `T`.
#[derive(Clone, Debug)]
pub struct FBasis {
    pub lattice: Arc<Lattice>,
    pub blocks: Vec<PoleBlock>,
    pub elements: Vec<FElement>,
    index: BTreeMap<(usize, usize, usize, usize), usize>,
}

impl FBasis {
    pub fn new(t: &Arc<Lattice>) -> Result<FBasis> {
        let blocks: Vec<PoleBlock> = pol_t_lattices(t)?
            .into_par_iter()
            .map(|(signature, p)| {
                let reps = orbit_reps(t, &p)?;
                let j = reps.iter().map(j_pi).collect::<Result<_>>()?;
                let aut = aut_morphisms(&p);
                Ok(PoleBlock { signature, lattice: p, reps, j, aut })
            })
            .collect::<Result<_>>()?;
        let mut keys = Vec::new();
        for (bi, b) in blocks.iter().enumerate() {
            for chi in 0..b.reps.len() {
                for tau in 0..b.aut.len() {
                    for theta in 0..b.reps.len() {
                        keys.push((bi, chi, tau, theta));
                    }
                }
            }
        }
        let elements: Vec<FElement> = keys
            .par_iter()
            .map(|&(block, chi, tau, theta)| {
                let b = &blocks[block];
                let value = f_general_with(&b.j[chi], &b.aut[tau], &b.reps[theta])?;
                Ok(FElement { block, chi, tau, theta, value })
            })
            .collect::<Result<_>>()?;
        let index = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(FBasis { lattice: t.clone(), blocks, elements, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, block: usize, chi: usize, tau: usize, theta: usize) -> Option<&FElement> {
        self.index.get(&(block, chi, tau, theta)).map(|&i| &self.elements[i])
    }

    /// Index of `τ ∘ σ` in the automorphism list of a block.
    fn aut_product(&self, block: usize, tau: usize, sigma: usize) -> Result<usize> {
        let aut = &self.blocks[block].aut;
        let ts = aut[tau].after(&aut[sigma])?;
        aut.iter().position(|a| a.map() == ts.map()).ok_or_else(|| Error::Internal("Aut(P) not closed".into()))
    }

    /// Expected value of `f_a ∘ f_b`.
    pub fn expected_product(&self, a: &FElement, b: &FElement) -> Result<LinMorph> {
        if a.block == b.block && a.theta == b.chi {
            let ts = self.aut_product(a.block, a.tau, b.tau)?;
            Ok(self.get(a.block, a.chi, ts, b.theta).expect("indexed").value.clone())
        } else {
            Ok(LinMorph::zero(self.lattice.clone(), self.lattice.clone()))
        }
    }
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn count_failures<T: Sync>(items: &[T], check: impl Fn(&T) -> Result<bool> + Sync) -> Result<usize> {
    items.par_iter().map(|x| check(x).map(|ok| usize::from(!ok))).try_reduce(|| 0, |a, b| Ok(a + b))
}

fn summary(total: usize, failures: usize, what: &str) -> (bool, String) {
    (failures == 0, format!("{} of {total} {what} hold", total - failures))
}

/// Runs one suite on `T`. Errors inside a check become failed records.
pub fn verify_suite(t: &Arc<Lattice>, suite: Suite) -> Vec<CheckRecord> {
    let basis = match FBasis::new(t) {
        Ok(b) => b,
        Err(e) => return vec![CheckRecord::new("f-basis", "f_{χ,τ,θ} = j^χ τ θ", false, format!("error: {e}"))],
    };
    let mut out = Vec::new();
    for s in suite.members() {
        out.extend(match s {
            Suite::Idempotents => idempotent_checks(&basis),
            Suite::Orthogonality => orthogonality_checks(&basis),
            Suite::Centrality => centrality_checks(t),
            Suite::Epsilon => epsilon_checks(t),
            Suite::Independence => independence_checks(&basis),
            Suite::Span => span_checks(t, 3),
            Suite::Opposites => opposite_checks(t),
            Suite::All => unreachable!("expanded by members"),
        });
    }
    out
}

pub fn idempotent_checks(basis: &FBasis) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for b in &basis.blocks {
        let pairs: Vec<(&JoinMorphism, &LinMorph)> = b.reps.iter().zip(&b.j).collect();
        out.push(CheckRecord::from_result(
            format!("j-pi-regular P={}", b.signature),
            "j^π π j^π = j^π",
            count_failures(&pairs, |(pi, j)| {
                let pj = lin_compose(&LinMorph::from_morphism(pi, 1), j)?;
                Ok(lin_compose(j, &pj)? == **j)
            })
            .map(|f| summary(pairs.len(), f, "representatives")),
        ));
        out.push(CheckRecord::from_result(
            format!("pi-j-pi P={}", b.signature),
            "π j^π = Σ_Y (−1)^{|E−Y|} ρ_Y",
            rho_sum(&b.lattice).and_then(|rs| {
                count_failures(&pairs, |(pi, j)| Ok(lin_compose(&LinMorph::from_morphism(pi, 1), j)? == rs))
                    .map(|f| summary(pairs.len(), f, "representatives"))
            }),
        ));
        out.push(CheckRecord::from_result(
            format!("f-idempotent P={}", b.signature),
            "f_{π,id,π}² = f_{π,id,π}",
            count_failures(&pairs, |(pi, j)| {
                let f = lin_compose(j, &LinMorph::from_morphism(pi, 1))?;
                Ok(lin_compose(&f, &f)? == f)
            })
            .map(|f| summary(pairs.len(), f, "representatives")),
        ));
        out.push(CheckRecord::from_result(
            format!("orbit-independence P={}", b.signature),
            "f_{σπ,id,σπ} = f_{π,id,π} for σ ∈ Aut(P)",
            count_failures(&pairs, |(pi, j)| {
                let f = lin_compose(j, &LinMorph::from_morphism(pi, 1))?;
                for s in &b.aut {
                    let spi = s.after(pi)?;
                    let g = lin_compose(&j_pi(&spi)?, &LinMorph::from_morphism(&spi, 1))?;
                    if g != f {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
            .map(|f| summary(pairs.len(), f, "representatives")),
        ));
    }
    let e = basis.blocks.iter().try_fold(LinMorph::zero(basis.lattice.clone(), basis.lattice.clone()), |acc, b| {
        b.reps.iter().zip(&b.j).try_fold(acc, |acc, (pi, j)| acc.add(&lin_compose(j, &LinMorph::from_morphism(pi, 1))?))
    });
    out.push(CheckRecord::from_result(
        "e-idempotent",
        "e_T² = e_T",
        e.and_then(|e| Ok((lin_compose(&e, &e)? == e, format!("e_T has {} terms", e.len())))),
    ));
    out
}

pub fn orthogonality_checks(basis: &FBasis) -> Vec<CheckRecord> {
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let (matching, other): (Vec<(usize, usize)>, Vec<(usize, usize)>) = pairs.into_iter().partition(|&(a, b)| {
        let (x, y) = (&basis.elements[a], &basis.elements[b]);
        x.block == y.block && x.theta == y.chi
    });
    let check = |&(a, b): &(usize, usize)| {
        let (x, y) = (&basis.elements[a], &basis.elements[b]);
        Ok(lin_compose(&x.value, &y.value)? == basis.expected_product(x, y)?)
    };
    vec![
        CheckRecord::from_result(
            "product-law",
            "f_{χ,τ,θ} f_{θ,σ,κ} = f_{χ,τσ,κ}",
            count_failures(&matching, check).map(|f| summary(matching.len(), f, "products")),
        ),
        CheckRecord::from_result(
            "orthogonality",
            "f_{χ,τ,θ} f_{π,σ,κ} = 0 for θ ≠ π",
            count_failures(&other, check).map(|f| summary(other.len(), f, "products")),
        ),
    ]
}

/// `α e_T = e_{T'} α` for all join-morphisms `α: T → T'`.
pub fn naturality_check(t: &Arc<Lattice>, e: &LinMorph, t2: &Arc<Lattice>, e2: &LinMorph) -> Result<(bool, String)> {
    let hom = enumerate_hom(t, t2)?;
    let f = count_failures(&hom, |a| {
        let a = LinMorph::from_morphism(a, 1);
        Ok(lin_compose(&a, e)? == lin_compose(e2, &a)?)
    })?;
    Ok(summary(hom.len(), f, "morphisms"))
}

fn commutes_with_all(z: &LinMorph, ends: &[JoinMorphism]) -> Result<(bool, String)> {
    let f = count_failures(ends, |a| {
        let a = LinMorph::from_morphism(a, 1);
        Ok(lin_compose(&a, z)? == lin_compose(z, &a)?)
    })?;
    Ok(summary(ends.len(), f, "endomorphisms"))
}

pub fn centrality_checks(t: &Arc<Lattice>) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let ends = match enumerate_hom(t, t) {
        Ok(e) => e,
        Err(e) => return vec![CheckRecord::new("endomorphisms", "End(T)", false, format!("error: {e}"))],
    };
    out.push(CheckRecord::from_result(
        "e-central",
        "α e_T = e_T α",
        e_t(t).and_then(|e| commutes_with_all(&e, &ends)),
    ));
    if pole_signature(t).is_some() {
        out.push(CheckRecord::from_result(
            "epsilon-central",
            "α ε_Q = ε_Q α",
            epsilon_q(t).and_then(|e| commutes_with_all(&e, &ends)),
        ));
        match pol_t_lattices(t) {
            Ok(poles) => {
                for (s, p) in poles {
                    out.push(CheckRecord::from_result(
                        format!("beta-central P={s}"),
                        "α β_{Q,P} = β_{Q,P} α",
                        beta(t, &p).and_then(|b| commutes_with_all(&b, &ends)),
                    ));
                }
            }
            Err(e) => out.push(CheckRecord::new("pole-quotients", "Pol_T", false, format!("error: {e}"))),
        }
    }
    out
}

/// Rank of `{z f z : f ∈ ends}` for a linear endomorphism `z`.
fn sandwich_rank(z: &LinMorph, w: &LinMorph, ends: &[JoinMorphism]) -> Result<usize> {
    let vecs: Vec<LinMorph> = ends
        .par_iter()
        .map(|f| lin_compose(z, &lin_compose(&LinMorph::from_morphism(f, 1), w)?))
        .collect::<Result<_>>()?;
    let terms: Vec<_> = vecs.iter().map(LinMorph::terms).collect();
    Ok(rank_of(&terms))
}

/// Checks on a pole lattice `Q`; empty for other lattices.
pub fn epsilon_checks(q: &Arc<Lattice>) -> Vec<CheckRecord> {
    if pole_signature(q).is_none() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let eps = match epsilon_q(q) {
        Ok(e) => e,
        Err(e) => return vec![CheckRecord::new("epsilon", "ε_Q", false, format!("error: {e}"))],
    };
    out.push(CheckRecord::from_result(
        "epsilon-idempotent",
        "ε_Q² = ε_Q",
        lin_compose(&eps, &eps).map(|sq| (sq == eps, format!("ε_Q has {} terms", eps.len()))),
    ));
    out.push(CheckRecord::from_result(
        "epsilon-rho-sum",
        "ε_Q = Σ_Y (−1)^{|E−Y|} ρ_Y",
        rho_sum(q).map(|rs| (rs == eps, String::new())),
    ));
    out.push(CheckRecord::from_result(
        "epsilon-corner",
        "dim ε_Q End(Q) ε_Q = |Aut(Q)|",
        enumerate_hom(q, q).and_then(|ends| {
            let r = sandwich_rank(&eps, &eps, &ends)?;
            let aut = aut_morphisms(q).len();
            Ok((r == aut, format!("rank {r}, |Aut(Q)| = {aut}")))
        }),
    ));
    out.push(CheckRecord::from_result(
        "epsilon-omega",
        "ε_Q ω = (−1)^{|E_1|} γ_{Q^op}",
        (|| {
            let w = FreeElt::from_map(&omega_map(q)?, 1);
            let lhs = apply_linmorph(&eps, &w)?;
            let rhs = gamma_op(q)?.scale(sign(e1_size(q)?))?;
            Ok((lhs == rhs, format!("{} terms", rhs.terms().len())))
        })(),
    ));
    let betas: Result<Vec<(PoleSignature, LinMorph)>> =
        pol_t_lattices(q).and_then(|ps| ps.into_iter().map(|(s, p)| Ok((s, beta(q, &p)?))).collect());
    match betas {
        Ok(betas) => {
            out.push(CheckRecord::from_result(
                "beta-sum",
                "Σ_P β_{Q,P} = id_Q",
                betas
                    .iter()
                    .try_fold(LinMorph::zero(q.clone(), q.clone()), |acc, (_, b)| acc.add(b))
                    .map(|s| (s == LinMorph::identity(q.clone()), format!("{} blocks", betas.len()))),
            ));
            for (s, b) in &betas {
                out.push(CheckRecord::from_result(
                    format!("beta-idempotent P={s}"),
                    "β_{Q,P}² = β_{Q,P}",
                    lin_compose(b, b).map(|sq| (sq == *b, String::new())),
                ));
            }
            out.push(CheckRecord::from_result(
                "beta-hom-zero",
                "dim β_{Q,P} End(Q) β_{Q,P'} = 0 for P ≇ P'",
                enumerate_hom(q, q).and_then(|ends| {
                    let mut nonzero = Vec::new();
                    for (i, (s1, b1)) in betas.iter().enumerate() {
                        for (j, (s2, b2)) in betas.iter().enumerate() {
                            if i != j && sandwich_rank(b1, b2, &ends)? != 0 {
                                nonzero.push(format!("{s1}/{s2}"));
                            }
                        }
                    }
                    Ok((nonzero.is_empty(), nonzero.join(" ")))
                }),
            ));
        }
        Err(e) => out.push(CheckRecord::new("beta", "β_{Q,P}", false, format!("error: {e}"))),
    }
    out
}

pub fn independence_checks(basis: &FBasis) -> Vec<CheckRecord> {
    let t = &basis.lattice;
    let terms: Vec<_> = basis.elements.iter().map(|e| e.value.terms()).collect();
    let rank = rank_of(&terms);
    let expected: usize = basis.blocks.iter().map(|b| b.reps.len() * b.reps.len() * b.aut.len()).sum();
    let mut out = vec![CheckRecord::new(
        "f-independent",
        "rank {f_{χ,τ,θ}} = Σ_P n(T,P)² |Aut(P)|",
        rank == expected && basis.len() == expected,
        format!("rank {rank} of {} elements, expected {expected}", basis.len()),
    )];
    out.push(CheckRecord::from_result(
        "pole-image-count",
        "Σ_P n(T,P)² |Aut(P)| = #{f ∈ End(T) : f(T) pole}",
        decomposition_report("T", t).map(|r| {
            (r.consistent && r.dim_pole_part as usize == expected, format!("{} vs {}", r.dim_pole_part, r.dim_check_direct))
        }),
    ));
    out
}

/// `pole_span_check` for `|X| = 0..=max_set` while `|T|^|X| <= 4096`.
pub fn span_checks(t: &Arc<Lattice>, max_set: usize) -> Vec<CheckRecord> {
    let e = match e_t(t) {
        Ok(e) => e,
        Err(e) => return vec![CheckRecord::new("span", "e_T", false, format!("error: {e}"))],
    };
    (0..=max_set)
        .take_while(|&m| (t.size() as u64).checked_pow(m as u32).is_some_and(|c| c <= 4096))
        .map(|m| {
            CheckRecord::from_result(
                format!("pole-span |X|={m}"),
                "e_T F_T(X) = span{φ : φ(X) pole}",
                pole_span_check_with(t, &e, &GroundSet::new(m)).map(|r| {
                    (r.passed(), format!("ranks {} / {} / {} over {} maps", r.rank_e_image, r.rank_pole_span, r.rank_union, r.maps))
                }),
            )
        })
        .collect()
}

pub fn opposite_checks(t: &Arc<Lattice>) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let t_op = Arc::new(opposite_lattice(t));
    out.push(CheckRecord::from_result(
        "op-involution-end",
        "(f^op)^op = f",
        enumerate_hom(t, t).and_then(|ends| {
            let f = count_failures(&ends, |f| {
                let once = op_morphism_with(f, t_op.clone(), t_op.clone())?;
                Ok(op_morphism_with(&once, t.clone(), t.clone())? == *f)
            })?;
            Ok(summary(ends.len(), f, "endomorphisms"))
        }),
    ));
    out.push(CheckRecord::from_result(
        "op-contravariant",
        "(g f)^op = f^op g^op",
        enumerate_hom(t, t).and_then(|ends| {
            // all pairs up to 40000, else every g against the first 64 f
            let fs: &[JoinMorphism] = if ends.len() * ends.len() <= 40_000 { &ends } else { &ends[..64] };
            let ops: Vec<JoinMorphism> =
                ends.iter().map(|f| op_morphism_with(f, t_op.clone(), t_op.clone())).collect::<Result<_>>()?;
            let f = count_failures(&(0..ends.len()).collect::<Vec<_>>(), |&gi| {
                for (fi, f) in fs.iter().enumerate() {
                    let gf = ends[gi].after(f)?;
                    if op_morphism_with(&gf, t_op.clone(), t_op.clone())? != ops[fi].after(&ops[gi])? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })?;
            Ok(summary(ends.len(), f, "choices of g"))
        }),
    ));
    let poles = match pol_t_lattices(t) {
        Ok(p) => p,
        Err(e) => {
            out.push(CheckRecord::new("pole-quotients", "Pol_T", false, format!("error: {e}")));
            return out;
        }
    };
    for (s, p) in poles {
        out.push(CheckRecord::from_result(
            format!("op-sections P={s}"),
            "f f^op = id (f onto), f^op f = id (f into)",
            (|| {
                let sur = enumerate_sur(t, &p)?;
                let inj = enumerate_inj(&p, t)?;
                let mut bad = 0;
                for f in &sur {
                    let fo = op_morphism(f);
                    let back = op_morphism_with(&fo, t.clone(), p.clone())?;
                    if back != *f || (0..p.size()).any(|y| f.apply(fo.apply(y)) != y) {
                        bad += 1;
                    }
                }
                for f in &inj {
                    let fo = op_morphism(f);
                    if (0..p.size()).any(|x| fo.apply(f.apply(x)) != x) {
                        bad += 1;
                    }
                }
                Ok(summary(sur.len() + inj.len(), bad, "morphisms"))
            })(),
        ));
        out.push(CheckRecord::from_result(
            format!("inj-sur-balance P={s}"),
            "|Inj(P,T)| = |Sur(T,P)|, Ω Ω = id",
            (|| {
                let sur = enumerate_sur(t, &p)?;
                let inj = enumerate_inj(&p, t)?;
                let f = count_failures(&inj, |l| Ok(omega(&omega(l)?)? == *l))?;
                crate::morphism::inj_sur_bijection(&p, t)?;
                Ok((f == 0 && inj.len() == sur.len(), format!("{} injections, {} surjections, {f} Ω failures", inj.len(), sur.len())))
            })(),
        ));
    }
    out
}

/// Checks over the enumerated posets of size `<= max_size`.
pub fn verify_corpus(max_size: usize) -> Vec<CheckRecord> {
    const KNOWN_POSETS: [usize; 7] = [1, 1, 2, 5, 16, 63, 318];
    const KNOWN_NATURAL: [usize; 6] = [1, 1, 2, 7, 40, 357];
    let mut out = Vec::new();
    let max = max_size.min(6);
    let mut all: Vec<Vec<Poset>> = Vec::new();
    for n in 0..=max {
        match enumerate_posets(n) {
            Ok(ps) => all.push(ps),
            Err(e) => {
                out.push(CheckRecord::new(format!("posets n={n}"), "poset count", false, format!("error: {e}")));
                return out;
            }
        }
    }
    let counts: Vec<usize> = all.iter().map(Vec::len).collect();
    out.push(CheckRecord::new(
        "poset-count",
        "unlabeled posets 1, 1, 2, 5, 16, 63, 318",
        counts[..] == KNOWN_POSETS[..=max],
        format!("{counts:?}"),
    ));
    let nat: Vec<usize> = (0..=max.min(5)).map(|n| naturally_labeled(n).len()).collect();
    out.push(CheckRecord::new(
        "natural-count",
        "naturally labeled posets 1, 1, 2, 7, 40, 357",
        nat[..] == KNOWN_NATURAL[..nat.len()],
        format!("{nat:?}"),
    ));
    let flat: Vec<&Poset> = all.iter().flatten().collect();
    let small: Vec<&Poset> = flat.iter().copied().filter(|p| p.size() <= 4).collect();
    let disagree = flat
        .iter()
        .filter(|p| pole_decomposition(p).is_some() != is_pole_by_permutation(p).is_some())
        .count();
    out.push(CheckRecord::new(
        "pole-criteria",
        "block decomposition ⟺ ∃τ: x ≰ y ⇒ y ≤ τ(x)",
        disagree == 0,
        format!("{} of {} posets agree", flat.len() - disagree, flat.len()),
    ));
    out.push(CheckRecord::from_result(
        "nonzero-condition",
        "∃S: δ S δ ≠ 0 ⟺ pole",
        count_failures(&small, |p| Ok(nonzero_condition(p.relation())? == pole_decomposition(p).is_some()))
            .map(|f| summary(small.len(), f, "posets")),
    ));
    out.push(CheckRecord::from_result(
        "r-delta",
        "R δ = δ",
        count_failures(&small, |p| {
            let d = delta(p.relation())?;
            Ok(rel_product(&RelLinComb::single(p.relation().clone(), 1)?, &d)? == d)
        })
        .map(|f| summary(small.len(), f, "posets")),
    ));
    out.push(CheckRecord::from_result(
        "s-delta",
        "S δ ≠ 0 ⟺ S = Δ_σ R, and then S δ = Δ_σ δ",
        count_failures(&small.iter().copied().filter(|p| p.size() <= 3).collect::<Vec<_>>(), |p| {
            let r = p.relation();
            let d = delta(r)?;
            for s in crate::relalg::right_invariant_relations(r) {
                let sd = rel_product(&RelLinComb::single(s.clone(), 1)?, &d)?;
                let ok = match s_delta_classify(&s, r)? {
                    Some(sigma) => sd == rel_product(&RelLinComb::single(sigma.delta(), 1)?, &d)? && !sd.is_zero(),
                    None => sd.is_zero(),
                };
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .map(|f| summary(small.iter().filter(|p| p.size() <= 3).count(), f, "posets")),
    ));
    let poles: Vec<&Poset> = flat.iter().copied().filter(|p| p.size() <= 5 && pole_decomposition(p).is_some()).collect();
    out.push(CheckRecord::from_result(
        "delta-square",
        "δ² = (−1)^{|E_1|} Δ_τ δ, idempotent",
        count_failures(&poles, |p| Ok(delta_square_identity(p.relation())?.passed()))
            .map(|f| summary(poles.len(), f, "pole posets")),
    ));
    out.push(CheckRecord::from_result(
        "rho-gamma",
        "ρ(γ_T) = δ",
        count_failures(&small, |p| {
            let d = downset_dual(p)?;
            Ok(&rho_free(&gamma(&d)?, &d)? == delta(p.relation())?.terms())
        })
        .map(|f| summary(small.len(), f, "posets")),
    ));
    let sigs: Vec<PoleSignature> = PoleSignature::all_up_to(max);
    out.push(CheckRecord::from_result(
        "rank-formula",
        "Σ_i (−1)^i C(|E|,i) (|Q|−i)^m = |Z(X)|",
        count_failures(&sigs, |s| {
            let q = Arc::new(s.to_lattice());
            for m in 0..=4 {
                if rank_sq(&q, m)? != z_basis(&q, &GroundSet::new(m))?.len() as i64 {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .map(|f| summary(sigs.len(), f, "pole lattices")),
    ));
    out.push(CheckRecord::from_result(
        "rank-reconciliation",
        "|Q|^m = Σ_P n(Q,P) rank S_P(m)",
        count_failures(&sigs, |s| {
            let q = Arc::new(s.to_lattice());
            let parts: Vec<(Arc<Lattice>, usize)> = pol_t_lattices(&q)?
                .into_iter()
                .map(|(_, p)| Ok((p.clone(), orbit_reps(&q, &p)?.len())))
                .collect::<Result<_>>()?;
            for m in 0..=4u32 {
                let mut total: i64 = 0;
                for (p, n) in &parts {
                    total += *n as i64 * rank_sq(p, m as usize)?;
                }
                if total != (q.size() as i64).pow(m) {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .map(|f| summary(sigs.len(), f, "pole lattices")),
    ));
    out.push(CheckRecord::from_result(
        "pole-endomorphisms",
        "Σ_P n(Q,P)² |Aut(P)| = |End(Q)|",
        count_failures(&sigs, |s| {
            let q = Arc::new(s.to_lattice());
            let r = decomposition_report(&s.to_string(), &q)?;
            Ok(r.dim_pole_part == r.total_endomorphisms && r.consistent)
        })
        .map(|f| summary(sigs.len(), f, "pole lattices")),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[u8]) -> Arc<Lattice> {
        Arc::new(PoleSignature::new(v.to_vec()).unwrap().to_lattice())
    }

    fn all_pass(records: &[CheckRecord]) -> bool {
        records.iter().all(|r| r.passed)
    }

    #[test]
    fn suite_names_round_trip() {
        for n in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap().to_string(), n);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn idempotents_on_square() {
        let r = verify_suite(&sig(&[1, 2, 1]), Suite::Idempotents);
        assert!(all_pass(&r), "{r:#?}");
    }

    #[test]
    fn orthogonality_on_chain() {
        let r = verify_suite(&sig(&[1, 1, 1]), Suite::Orthogonality);
        assert!(all_pass(&r), "{r:#?}");
    }

    #[test]
    fn independence_on_square() {
        let basis = FBasis::new(&sig(&[1, 2, 1])).unwrap();
        assert_eq!(basis.len(), 16);
        let r = independence_checks(&basis);
        assert!(all_pass(&r), "{r:#?}");
        assert!(r[0].detail.starts_with("rank 16"));
    }

    #[test]
    fn everything_on_square() {
        let r = verify_suite(&sig(&[1, 2, 1]), Suite::All);
        assert!(all_pass(&r), "{r:#?}");
    }

    #[test]
    fn corpus_small() {
        let r = verify_corpus(3);
        assert!(all_pass(&r), "{r:#?}");
    }
}
