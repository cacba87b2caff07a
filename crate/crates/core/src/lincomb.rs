//! Finitely supported integer linear combinations with overflow-checked
//! arithmetic.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// `Σ c_k [k]` over a basis `K`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: i64) -> Self {
        let mut out = Self::zero();
        if c != 0 {
            out.terms.insert(k, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    /// Terms in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, k: K, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(k);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().checked_add(c).ok_or(Error::Overflow("linear combination"))?;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_term(k.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1)?)
    }

    pub fn scale(&self, c: i64) -> Result<Self> {
        let mut out = Self::zero();
        for (k, v) in self.iter() {
            out.add_term(k.clone(), v.checked_mul(c).ok_or(Error::Overflow("scaling"))?)?;
        }
        Ok(out)
    }

    /// Coefficients reduced into `0..m`; terms divisible by `m` vanish.
    pub fn reduce_mod(&self, m: i64) -> Result<Self> {
        if m <= 0 {
            return Err(Error::Domain(format!("modulus must be positive, got {m}")));
        }
        let mut out = Self::zero();
        for (k, c) in self.iter() {
            out.add_term(k.clone(), c.rem_euclid(m))?;
        }
        Ok(out)
    }

    /// `Σ c_k [f(k)]`, collecting keys that collide.
    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> Result<LinComb<K2>> {
        let mut out = LinComb::zero();
        for (k, c) in self.iter() {
            out.add_term(f(k), c)?;
        }
        Ok(out)
    }

    /// Bilinear extension of `mul` on basis elements.
    pub fn product<K2: Ord + Clone, K3: Ord + Clone>(
        &self,
        other: &LinComb<K2>,
        mut mul: impl FnMut(&K, &K2) -> K3,
    ) -> Result<LinComb<K3>> {
        let mut out = LinComb::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_term(mul(a, b), ca.checked_mul(cb).ok_or(Error::Overflow("product"))?)?;
            }
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, i64)> for LinComb<K> {
    /// Panics on coefficient overflow; use [`LinComb::add_term`] for checked sums.
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c).expect("coefficient overflow");
        }
        out
    }
}
