//! Integer weight matrices, weight classes, and count vectors.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::mask::Mask;

/// An m-row integer weight matrix over the ground set, together with the
/// derived partition of elements into weight classes (elements sharing a
/// column vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: Vec<Vec<i64>>,
    n: usize,
    delta: i64,
    /// column vector -> elements carrying it, keyed deterministically
    classes: BTreeMap<Vec<i64>, Vec<usize>>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<i64>>, n: usize) -> Result<WeightMatrix> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::spec(format!(
                    "weight row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        let delta = rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|w| w.abs())
            .max()
            .unwrap_or(0);
        let mut classes: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for e in 0..n {
            let col: Vec<i64> = rows.iter().map(|r| r[e]).collect();
            classes.entry(col).or_default().push(e);
        }
        Ok(WeightMatrix {
            rows,
            n,
            delta,
            classes,
        })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest absolute entry.
    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn column(&self, e: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[e]).collect()
    }

    /// Weight classes E_alpha in ascending key order. Only nonempty classes
    /// appear.
    pub fn classes(&self) -> &BTreeMap<Vec<i64>, Vec<usize>> {
        &self.classes
    }

    /// W * chi(S) as exact integers.
    pub fn weight_of(&self, s: &Mask) -> Vec<i64> {
        let mut acc = vec![0i64; self.m()];
        for e in s.iter() {
            for (i, row) in self.rows.iter().enumerate() {
                acc[i] += row[e];
            }
        }
        acc
    }

    /// Per-class sums of a fractional point's coordinates.
    pub fn class_sums(&self, x: &[BigRational]) -> BTreeMap<Vec<i64>, BigRational> {
        self.classes
            .iter()
            .map(|(alpha, elems)| {
                let sum = elems
                    .iter()
                    .map(|&e| x[e].clone())
                    .fold(BigRational::zero(), |a, b| a + b);
                (alpha.clone(), sum)
            })
            .collect()
    }
}

/// Prescription of how many elements each weight class must contribute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    pub counts: BTreeMap<Vec<i64>, usize>,
}

impl CountVector {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Sum over classes of alpha * l_alpha.
    pub fn weighted_total(&self, m: usize) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); m];
        for (alpha, &l) in &self.counts {
            for (i, a) in alpha.iter().enumerate() {
                acc[i] += BigInt::from(*a) * BigInt::from(l as i64);
            }
        }
        acc
    }

    /// L1 distance to the per-class fractional sums.
    pub fn distance_to(&self, sums: &BTreeMap<Vec<i64>, BigRational>) -> BigRational {
        let mut acc = BigRational::zero();
        for (alpha, &l) in &self.counts {
            let s = sums.get(alpha).cloned().unwrap_or_else(BigRational::zero);
            acc += (BigRational::from(BigInt::from(l as i64)) - s).abs();
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_partition_ground_set() {
        let w = WeightMatrix::new(vec![vec![0, 1, 1, 2]], 4).unwrap();
        assert_eq!(w.delta(), 2);
        assert_eq!(w.classes().len(), 3);
        assert_eq!(w.classes()[&vec![1]], vec![1, 2]);
        let covered: usize = w.classes().values().map(Vec::len).sum();
        assert_eq!(covered, 4);
    }

    #[test]
    fn weight_of_subset() {
        let w = WeightMatrix::new(vec![vec![0, 1, 1, 2], vec![-1, 0, 0, 1]], 4).unwrap();
        let s = Mask::from_elements(4, [0, 3]);
        assert_eq!(w.weight_of(&s), vec![2, 0]);
    }

    #[test]
    fn row_length_checked() {
        assert!(WeightMatrix::new(vec![vec![0, 1]], 3).is_err());
    }
}
