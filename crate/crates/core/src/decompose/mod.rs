//! Pole lattices below a lattice, orbit representatives, and the block
//! decomposition of the pole part of its endomorphism algebra.

pub mod verify;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract_err, Error, Result};
use crate::lattice::{pole_signature, Lattice, PoleSignature};
use crate::morphism::{enumerate_hom, enumerate_inj, enumerate_sur, JoinMorphism};
use crate::poset::{automorphisms, pole_decomposition};

pub use verify::{verify_corpus, verify_suite, CheckRecord, FBasis, Suite};

/// Signatures of the pole lattices `P` admitting a surjection `T → P`,
/// in lexicographic order.
pub fn pol_t(t: &Arc<Lattice>) -> Result<Vec<PoleSignature>> {
    Ok(pol_t_lattices(t)?.into_iter().map(|(s, _)| s).collect())
}

/// [`pol_t`] together with the canonical lattice of each signature.
pub fn pol_t_lattices(t: &Arc<Lattice>) -> Result<Vec<(PoleSignature, Arc<Lattice>)>> {
    let found: Vec<Option<(PoleSignature, Arc<Lattice>)>> = PoleSignature::all_up_to(t.size())
        .into_par_iter()
        .map(|s| {
            let p = Arc::new(s.to_lattice());
            Ok(if enumerate_sur(t, &p)?.is_empty() { None } else { Some((s, p)) })
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Automorphisms of a lattice as join-morphisms, sorted by map.
pub fn aut_morphisms(p: &Arc<Lattice>) -> Vec<JoinMorphism> {
    automorphisms(p.poset())
        .elements
        .into_iter()
        .map(|s| JoinMorphism::new_unchecked(p.clone(), p.clone(), s.image().to_vec()))
        .collect()
}

/// Lexicographically smallest member of each `Aut(P)`-orbit on `Sur(T, P)`.
/// Fails if some orbit is smaller than `|Aut(P)|`.
pub fn orbit_reps(t: &Arc<Lattice>, p: &Arc<Lattice>) -> Result<Vec<JoinMorphism>> {
    if pole_signature(p).is_none() {
        return contract_err("orbit representatives need a pole lattice");
    }
    let aut = aut_morphisms(p);
    let sur = enumerate_sur(t, p)?;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut reps = Vec::new();
    // sur is sorted, so the first unseen member of an orbit is its minimum
    for pi in sur {
        if seen.contains(pi.map()) {
            continue;
        }
        let orbit: BTreeSet<Vec<usize>> = aut.iter().map(|s| s.after(&pi).map(JoinMorphism::into_map)).collect::<Result<_>>()?;
        if orbit.len() != aut.len() {
            return Err(Error::Internal(format!("Aut(P) does not act freely on {:?}", pi.map())));
        }
        seen.extend(orbit);
        reps.push(pi);
    }
    Ok(reps)
}

/// Does the image of `f` form a pole subposet?
pub fn has_pole_image(f: &JoinMorphism) -> bool {
    let img: Vec<usize> = f.map().iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    pole_decomposition(&f.target().poset().induced(&img)).is_some()
}

/// One pole lattice `P` in the decomposition of a lattice `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub signature: PoleSignature,
    /// Number of `Aut(P)`-orbits on `Sur(T, P)`: the matrix size.
    pub n: usize,
    pub aut_order: usize,
    pub orbit_reps: Vec<Vec<usize>>,
    pub sur_count: usize,
    pub inj_count: usize,
}

impl ReportEntry {
    /// The group algebra `k Aut(P)`, written with `Aut(P) ≅ C2^m`.
    pub fn group_algebra(&self) -> String {
        match self.aut_order.trailing_zeros() {
            0 => "k".to_string(),
            1 => "kC2".to_string(),
            m => format!("k(C2^{m})"),
        }
    }

    pub fn dim(&self) -> u64 {
        (self.n * self.n * self.aut_order) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub name: String,
    pub size: usize,
    pub entries: Vec<ReportEntry>,
    /// `Σ n² |Aut(P)|`.
    pub dim_pole_part: u64,
    /// Join-endomorphisms whose image is a pole subposet.
    pub dim_check_direct: u64,
    pub total_endomorphisms: u64,
    /// `|Inj(P, T)| = |Sur(T, P)|` for every entry.
    pub inj_sur_balanced: bool,
    pub consistent: bool,
}

impl DecompositionReport {
    /// E.g. `M_1(k) ⊕ M_3(k) ⊕ M_2(k) ⊕ M_1(kC2), dim 16`.
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|e| format!("M_{}({})", e.n, e.group_algebra())).collect();
        format!("{}, dim {}", parts.join(" ⊕ "), self.dim_pole_part)
    }
}

impl fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lattice {} (size {})", self.name, self.size)?;
        writeln!(f, "{:<16} {:>4} {:>6} {:>6} {:>6}", "P", "n", "|Aut|", "|Sur|", "|Inj|")?;
        for e in &self.entries {
            writeln!(
                f,
                "{:<16} {:>4} {:>6} {:>6} {:>6}",
                e.signature.to_string(),
                e.n,
                e.aut_order,
                e.sur_count,
                e.inj_count
            )?;
        }
        writeln!(f, "pole-image endomorphisms: {}", self.dim_check_direct)?;
        writeln!(f, "all endomorphisms: {}", self.total_endomorphisms)?;
        writeln!(f, "consistent: {}", self.consistent)?;
        write!(f, "{}", self.summary())
    }
}

pub fn decomposition_report(name: &str, t: &Arc<Lattice>) -> Result<DecompositionReport> {
    let entries: Vec<ReportEntry> = pol_t_lattices(t)?
        .into_par_iter()
        .map(|(signature, p)| {
            let reps = orbit_reps(t, &p)?;
            let aut_order = automorphisms(p.poset()).order();
            let sur_count = reps.len() * aut_order;
            let inj_count = enumerate_inj(&p, t)?.len();
            Ok(ReportEntry {
                signature,
                n: reps.len(),
                aut_order,
                orbit_reps: reps.into_iter().map(JoinMorphism::into_map).collect(),
                sur_count,
                inj_count,
            })
        })
        .collect::<Result<_>>()?;
    let ends = enumerate_hom(t, t)?;
    let dim_check_direct = ends.par_iter().filter(|f| has_pole_image(f)).count() as u64;
    let dim_pole_part = entries.iter().map(ReportEntry::dim).sum();
    Ok(DecompositionReport {
        name: name.to_string(),
        size: t.size(),
        inj_sur_balanced: entries.iter().all(|e| e.inj_count == e.sur_count),
        consistent: dim_pole_part == dim_check_direct,
        entries,
        dim_pole_part,
        dim_check_direct,
        total_endomorphisms: ends.len() as u64,
    })
}
