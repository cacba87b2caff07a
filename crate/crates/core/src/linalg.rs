//! Exact integer matrices and fraction-free rank.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{dim_err, Result};
use crate::lincomb::LinComb;

/// A dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return dim_err("ragged matrix rows");
        }
        let n = rows.len();
        Ok(IntMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// One row per combination; columns are the union of supports in key order.
    pub fn from_lincombs<K: Ord + Clone>(vecs: &[&LinComb<K>]) -> Self {
        let mut index: BTreeMap<&K, usize> = BTreeMap::new();
        for v in vecs {
            for k in v.keys() {
                index.entry(k).or_insert(0);
            }
        }
        for (i, slot) in index.values_mut().enumerate() {
            *slot = i;
        }
        let mut m = IntMatrix::zeros(vecs.len(), index.len());
        for (r, v) in vecs.iter().enumerate() {
            for (k, c) in v.iter() {
                m.set(r, index[k], c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    /// Rank over the rationals by Bareiss elimination. Runs in `i128` and
    /// restarts with big integers if an intermediate value overflows.
    pub fn rank(&self) -> usize {
        match self.rank_i128() {
            Some(r) => r,
            None => self.rank_bigint(),
        }
    }

    fn rank_i128(&self) -> Option<usize> {
        let (n, m) = (self.rows, self.cols);
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut prev: i128 = 1;
        let mut rank = 0;
        for col in 0..m {
            if rank == n {
                break;
            }
            let Some(p) = (rank..n).find(|&r| a[r * m + col] != 0) else { continue };
            if p != rank {
                for j in 0..m {
                    a.swap(p * m + j, rank * m + j);
                }
            }
            let piv = a[rank * m + col];
            for i in rank + 1..n {
                let f = a[i * m + col];
                for j in col + 1..m {
                    let v = piv.checked_mul(a[i * m + j])?.checked_sub(f.checked_mul(a[rank * m + j])?)?;
                    a[i * m + j] = v / prev;
                }
                a[i * m + col] = 0;
            }
            prev = piv;
            rank += 1;
        }
        Some(rank)
    }

    fn rank_bigint(&self) -> usize {
        let (n, m) = (self.rows, self.cols);
        let mut a: Vec<BigInt> = self.data.iter().map(|&x| BigInt::from(x)).collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..m {
            if rank == n {
                break;
            }
            let Some(p) = (rank..n).find(|&r| !a[r * m + col].is_zero()) else { continue };
            if p != rank {
                for j in 0..m {
                    a.swap(p * m + j, rank * m + j);
                }
            }
            let piv = a[rank * m + col].clone();
            for i in rank + 1..n {
                let f = a[i * m + col].clone();
                for j in col + 1..m {
                    let v = &piv * &a[i * m + j] - &f * &a[rank * m + j];
                    a[i * m + j] = v / &prev;
                }
                a[i * m + col] = BigInt::zero();
            }
            prev = piv;
            rank += 1;
        }
        rank
    }
}

/// Rank of a family of linear combinations.
pub fn rank_of<K: Ord + Clone>(vecs: &[&LinComb<K>]) -> usize {
    IntMatrix::from_lincombs(vecs).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent oracle: rank via exact rational elimination on fractions
    // kept as (numerator, denominator) big integers.
    fn rational_rank(rows: &[Vec<i64>]) -> usize {
        use num_bigint::BigInt;
        let mut a: Vec<Vec<(BigInt, BigInt)>> =
            rows.iter().map(|r| r.iter().map(|&x| (BigInt::from(x), BigInt::one())).collect()).collect();
        let n = a.len();
        let m = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..m {
            let Some(p) = (rank..n).find(|&r| !a[r][col].0.is_zero()) else { continue };
            a.swap(p, rank);
            let (pn, pd) = a[rank][col].clone();
            for i in 0..n {
                if i == rank || a[i][col].0.is_zero() {
                    continue;
                }
                // row_i -= (a_i,col / pivot) * row_rank
                let (fn_, fd) = a[i][col].clone();
                for j in 0..m {
                    let (rn, rd) = a[rank][j].clone();
                    let (xn, xd) = a[i][j].clone();
                    // x - (fn/fd)/(pn/pd) * r = x - fn*pd*rn/(fd*pn*rd)
                    let sn = &fn_ * &pd * &rn;
                    let sd = &fd * &pn * &rd;
                    a[i][j] = (&xn * &sd - &sn * &xd, &xd * &sd);
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_ranks() {
        let m = IntMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
        let m = IntMatrix::from_rows(vec![vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 0]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(IntMatrix::zeros(0, 0).rank(), 0);
        assert_eq!(IntMatrix::zeros(3, 2).rank(), 0);
    }

    #[test]
    fn bigint_path_matches() {
        let big = i64::MAX / 3;
        let m = IntMatrix::from_rows(vec![vec![big, big - 1, 7], vec![big - 5, big, 3], vec![1, 2, big]]).unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.rank_bigint(), 3);
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_rational_elimination(
            rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 0..6)
        ) {
            let m = IntMatrix::from_rows(rows.clone()).unwrap();
            prop_assert_eq!(m.rank(), rational_rank(&rows));
            prop_assert_eq!(m.rank_bigint(), m.rank());
        }
    }
}
