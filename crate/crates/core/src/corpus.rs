//! Named small lattices used by the test corpus and the command line.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{downset_lattice, lattice_from_poset, Lattice};
use crate::poset::{enumerate_posets, Poset};

#[derive(Clone, Debug)]
pub struct NamedLattice {
    pub name: String,
    pub lattice: Arc<Lattice>,
}

fn from_poset(p: &Poset) -> Result<Lattice> {
    lattice_from_poset(p).ok_or_else(|| Error::Internal("corpus poset is not a lattice".into()))
}

pub fn chain(n: usize) -> Result<Lattice> {
    Lattice::chain(n)
}

/// The lattice of subsets of a `k`-set.
pub fn boolean(k: usize) -> Result<Lattice> {
    Ok(downset_lattice(&Poset::antichain(k))?.lattice)
}

/// `0 < a, b, c < 1`.
pub fn m3() -> Result<Lattice> {
    from_poset(&Poset::from_relations(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])?)
}

/// The pentagon `0 < a < b < 1`, `0 < c < 1`.
pub fn n5() -> Result<Lattice> {
    from_poset(&Poset::from_relations(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])?)
}

/// Looks up `chain-N`, `square`, `cube`, `boolean-K`, `m3` or `n5`.
pub fn by_name(name: &str) -> Result<Option<Lattice>> {
    let l = match name {
        "square" => boolean(2)?,
        "cube" => boolean(3)?,
        "m3" | "M3" => m3()?,
        "n5" | "N5" | "pentagon" => n5()?,
        _ => {
            if let Some(n) = name.strip_prefix("chain-").and_then(|s| s.parse().ok()) {
                chain(n)?
            } else if let Some(k) = name.strip_prefix("boolean-").and_then(|s| s.parse().ok()) {
                boolean(k)?
            } else {
                return Ok(None);
            }
        }
    };
    Ok(Some(l))
}

fn describe(l: &Lattice, index: usize) -> Result<String> {
    let n = l.size();
    let known = [(chain(n)?, format!("chain-{n}")), (boolean(2)?, "square".into()), (m3()?, "m3".into()), (n5()?, "n5".into())];
    for (k, name) in known {
        if k.size() == n && k.poset().is_isomorphic(l.poset())? {
            return Ok(name);
        }
    }
    Ok(format!("L{n}.{index}"))
}

/// Every lattice with `1..=max_size` elements up to isomorphism, in the
/// order of the poset enumerator, named `chain-N`, `square`, `m3`, `n5` or
/// `L<size>.<index>`.
pub fn lattices_up_to(max_size: usize) -> Result<Vec<NamedLattice>> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        let mut index = 0;
        for p in enumerate_posets(n)? {
            if let Some(l) = lattice_from_poset(&p) {
                index += 1;
                out.push(NamedLattice { name: describe(&l, index)?, lattice: Arc::new(l) });
            }
        }
    }
    Ok(out)
}

/// All lattices of size at most 6, then the cube.
pub fn standard_corpus() -> Result<Vec<NamedLattice>> {
    let mut out = lattices_up_to(6)?;
    out.push(NamedLattice { name: "cube".into(), lattice: Arc::new(boolean(3)?) });
    Ok(out)
}
