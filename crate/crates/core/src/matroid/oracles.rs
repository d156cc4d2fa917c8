//! Concrete independence oracles behind compiled matroids.

use num::{BigRational, Zero};

use crate::mask::Mask;
use crate::matroid::spec::mul_mod;
use crate::matroid::IndependenceOracle;

pub(crate) struct UniformOracle {
    pub rank: usize,
}

impl IndependenceOracle for UniformOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        s.len() <= self.rank
    }
}

pub(crate) struct PartitionOracle {
    /// block index of each element
    pub block_of: Vec<usize>,
    pub capacities: Vec<usize>,
}

impl IndependenceOracle for PartitionOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        let mut used = vec![0usize; self.capacities.len()];
        for e in s.iter() {
            let b = self.block_of[e];
            used[b] += 1;
            if used[b] > self.capacities[b] {
                return false;
            }
        }
        true
    }
}

pub(crate) struct GraphicOracle {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl IndependenceOracle for GraphicOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        // acyclicity via union-find
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in s.iter() {
            let (u, v) = self.edges[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    }
}

pub(crate) struct LinearRationalOracle {
    /// column-major: columns[j] is the vector of element j
    pub columns: Vec<Vec<BigRational>>,
}

impl IndependenceOracle for LinearRationalOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        let cols: Vec<&Vec<BigRational>> = s.iter().map(|e| &self.columns[e]).collect();
        if cols.is_empty() {
            return true;
        }
        let rows = cols[0].len();
        if cols.len() > rows {
            return false;
        }
        // Gaussian elimination with full pivoting over the rationals
        let mut a: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let ncols = cols.len();
        let mut rank = 0usize;
        for col in 0..ncols {
            let pivot = (rank..rows).find(|&r| !a[r][col].is_zero());
            let Some(p) = pivot else { return false };
            a.swap(rank, p);
            let inv = a[rank][col].clone();
            for r in rank + 1..rows {
                if !a[r][col].is_zero() {
                    let f = &a[r][col] / &inv;
                    for c in col..ncols {
                        let sub = &f * &a[rank][c];
                        a[r][c] = &a[r][c] - sub;
                    }
                }
            }
            rank += 1;
        }
        rank == ncols
    }
}

pub(crate) struct LinearPrimeOracle {
    pub p: u64,
    /// column-major, entries reduced mod p
    pub columns: Vec<Vec<u64>>,
}

impl IndependenceOracle for LinearPrimeOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        let cols: Vec<&Vec<u64>> = s.iter().map(|e| &self.columns[e]).collect();
        if cols.is_empty() {
            return true;
        }
        let rows = cols[0].len();
        if cols.len() > rows {
            return false;
        }
        let p = self.p;
        let mut a: Vec<Vec<u64>> = (0..rows)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        let ncols = cols.len();
        let mut rank = 0usize;
        for col in 0..ncols {
            let Some(piv) = (rank..rows).find(|&r| a[r][col] != 0) else {
                return false;
            };
            a.swap(rank, piv);
            let inv = crate::matroid::spec::pow_mod(a[rank][col], p - 2, p);
            for r in rank + 1..rows {
                if a[r][col] != 0 {
                    let f = mul_mod(a[r][col], inv, p);
                    for c in col..ncols {
                        let sub = mul_mod(f, a[rank][c], p);
                        a[r][c] = (a[r][c] + p - sub) % p;
                    }
                }
            }
            rank += 1;
        }
        rank == ncols
    }
}

pub(crate) struct TransversalOracle {
    pub left_size: usize,
    pub adjacency: Vec<Vec<usize>>,
}

impl TransversalOracle {
    fn try_match(
        &self,
        e: usize,
        matched_to: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &l in &self.adjacency[e] {
            if !visited[l] {
                visited[l] = true;
                let free = match matched_to[l] {
                    None => true,
                    Some(prev) => self.try_match(prev, matched_to, visited),
                };
                if free {
                    matched_to[l] = Some(e);
                    return true;
                }
            }
        }
        false
    }
}

impl IndependenceOracle for TransversalOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        let mut matched_to: Vec<Option<usize>> = vec![None; self.left_size];
        for e in s.iter() {
            let mut visited = vec![false; self.left_size];
            if !self.try_match(e, &mut matched_to, &mut visited) {
                return false;
            }
        }
        true
    }
}

pub(crate) struct DirectSumOracle {
    pub parts: Vec<std::sync::Arc<dyn IndependenceOracle>>,
    /// offsets[i] is the first global index of part i; last entry is n
    pub offsets: Vec<usize>,
}

impl IndependenceOracle for DirectSumOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        for (i, part) in self.parts.iter().enumerate() {
            let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
            let mut local = Mask::empty(hi - lo);
            for e in s.iter() {
                if e >= lo && e < hi {
                    local.insert(e - lo);
                }
            }
            if !part.is_independent(&local) {
                return false;
            }
        }
        true
    }
}

pub(crate) struct RestrictionOracle {
    pub base: std::sync::Arc<dyn IndependenceOracle>,
    pub base_n: usize,
    /// new index -> base index
    pub keep: Vec<usize>,
}

impl IndependenceOracle for RestrictionOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        let lifted = Mask::from_elements(self.base_n, s.iter().map(|e| self.keep[e]));
        self.base.is_independent(&lifted)
    }
}

pub(crate) struct ContractionOracle {
    pub base: std::sync::Arc<dyn IndependenceOracle>,
    pub base_n: usize,
    /// new index -> base index (elements outside the contracted set)
    pub remaining: Vec<usize>,
    /// the contracted independent set, in base indices
    pub contract: Vec<usize>,
}

impl IndependenceOracle for ContractionOracle {
    fn is_independent(&self, s: &Mask) -> bool {
        let lifted = Mask::from_elements(
            self.base_n,
            s.iter()
                .map(|e| self.remaining[e])
                .chain(self.contract.iter().copied()),
        );
        self.base.is_independent(&lifted)
    }
}
