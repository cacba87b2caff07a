//! The `LatticeFile` JSON format: an order matrix as rows of '0'/'1'
//! characters, row `i` column `j` set iff `i ≤ j`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use polecalc::{lattice_from_poset, GroundSet, Lattice, Poset, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub name: String,
    pub size: usize,
    pub leq: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl LatticeFile {
    pub fn read(path: &Path) -> Result<LatticeFile> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    #[cfg(test)]
    pub fn from_poset(name: &str, p: &Poset) -> LatticeFile {
        LatticeFile {
            name: name.to_string(),
            size: p.size(),
            leq: p.relation().to_strings(),
            labels: p.ground().labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_poset(&self) -> Result<Poset> {
        let n = self.size;
        if self.leq.len() != n {
            bail!("{}: leq has {} rows, size is {n}", self.name, self.leq.len());
        }
        let mut r = Relation::empty(n, n);
        for (i, row) in self.leq.iter().enumerate() {
            if row.chars().count() != n {
                bail!("{}: leq row {i} has length {}, expected {n}", self.name, row.chars().count());
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '1' => r.set(i, j, true),
                    '0' => {}
                    _ => bail!("{}: leq row {i} contains {c:?}", self.name),
                }
            }
        }
        if !r.is_order() {
            bail!("{}: leq is not reflexive, antisymmetric and transitive", self.name);
        }
        let ground = match &self.labels {
            Some(l) if l.len() != n => bail!("{}: {} labels for size {n}", self.name, l.len()),
            Some(l) => GroundSet::with_labels(l.clone())?,
            None => GroundSet::new(n),
        };
        Ok(Poset::with_ground(ground, r)?)
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        match lattice_from_poset(&self.to_poset()?) {
            Some(l) => Ok(l),
            None => bail!("{}: the order is not a lattice", self.name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(leq: &[&str]) -> LatticeFile {
        LatticeFile { name: "t".into(), size: leq.len(), leq: leq.iter().map(|s| s.to_string()).collect(), labels: None }
    }

    #[test]
    fn parses_square() {
        let f = file(&["1111", "0101", "0011", "0001"]);
        let l = f.to_lattice().unwrap();
        assert_eq!(l.size(), 4);
        assert_eq!(LatticeFile::from_poset("t", l.poset()), f);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(file(&["11", "0"]).to_poset().is_err());
        assert!(file(&["1x", "01"]).to_poset().is_err());
        assert!(file(&["11", "11"]).to_poset().is_err());
        assert!(file(&["100", "010", "001"]).to_lattice().is_err());
    }
}
