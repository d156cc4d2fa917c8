//! Ground-set and matroid abstractions: compiled independence oracles,
//! rank, greedy bases, minors, and desk-scale enumeration.

pub mod axioms;
mod oracles;
pub mod spec;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::mask::Mask;
pub use spec::{FieldSpec, MatroidSpec};

/// Black-box independence predicate. Implementations must be pure and
/// deterministic: the same subset always gets the same verdict.
pub trait IndependenceOracle: Send + Sync {
    fn is_independent(&self, s: &Mask) -> bool;
}

/// Per-subset rank cache for small ground sets, shared across handles.
pub struct RankTable {
    n: usize,
    rank: Vec<u8>,
}

/// Largest ground set for which exhaustive subset routines are attempted.
pub const EXHAUSTIVE_LIMIT: usize = 24;

impl RankTable {
    /// Rank of the subset encoded by the low `n` bits of `bits`.
    pub fn rank_bits(&self, bits: u64) -> usize {
        self.rank[bits as usize] as usize
    }

    pub fn rank(&self, s: &Mask) -> usize {
        self.rank_bits(s.bits())
    }

    pub fn is_independent_bits(&self, bits: u64) -> bool {
        self.rank[bits as usize] as u32 == bits.count_ones()
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }
}

/// A compiled matroid: an oracle plus bookkeeping (call counter, cached
/// rank, the originating spec for structure-aware algorithms).
///
/// Cloning (or [`Matroid::fork`]) shares the oracle and caches; `fork` gives
/// the new handle an isolated call counter. Under concurrent use of one
/// handle the counter is maintained with relaxed atomics and may be
/// approximate.
pub struct Matroid {
    n: usize,
    oracle: Arc<dyn IndependenceOracle>,
    spec: MatroidSpec,
    calls: Arc<AtomicU64>,
    rank_full: Arc<OnceLock<usize>>,
    table: Arc<OnceLock<RankTable>>,
    /// For minors: new index -> element id in the parent matroid.
    parent_ids: Option<Arc<Vec<usize>>>,
}

impl Clone for Matroid {
    fn clone(&self) -> Self {
        Matroid {
            n: self.n,
            oracle: self.oracle.clone(),
            spec: self.spec.clone(),
            calls: self.calls.clone(),
            rank_full: self.rank_full.clone(),
            table: self.table.clone(),
            parent_ids: self.parent_ids.clone(),
        }
    }
}

impl std::fmt::Debug for Matroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("spec", &self.spec)
            .finish()
    }
}

impl Matroid {
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &MatroidSpec {
        &self.spec
    }

    /// Mapping from this matroid's dense indices back to the parent matroid
    /// it was derived from, when it is a minor.
    pub fn parent_ids(&self) -> Option<&[usize]> {
        self.parent_ids.as_deref().map(Vec::as_slice)
    }

    /// Oracle calls observed through this handle (and its clones).
    pub fn oracle_calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// A handle sharing the oracle but with a fresh call counter and fresh
    /// lazy caches, so the calls it observes are those of a cold run.
    pub fn fork(&self) -> Matroid {
        Matroid {
            calls: Arc::new(AtomicU64::new(0)),
            rank_full: Arc::new(OnceLock::new()),
            table: Arc::new(OnceLock::new()),
            ..self.clone()
        }
    }

    pub fn is_independent(&self, s: &Mask) -> bool {
        debug_assert_eq!(s.ground_size(), self.n);
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.oracle.is_independent(s)
    }

    /// Max cardinality of an independent subset of `s`, by greedy insertion
    /// in canonical (ascending) element order.
    pub fn rank(&self, s: &Mask) -> usize {
        let mut acc = Mask::empty(self.n);
        for e in s.iter() {
            acc.insert(e);
            if !self.is_independent(&acc) {
                acc.remove(e);
            }
        }
        acc.len()
    }

    /// Rank of the whole matroid (cached).
    pub fn full_rank(&self) -> usize {
        *self
            .rank_full
            .get_or_init(|| self.rank(&Mask::full(self.n)))
    }

    /// Greedy basis in canonical element order: the lexicographically least
    /// basis.
    pub fn greedy_basis(&self) -> Mask {
        let mut acc = Mask::empty(self.n);
        for e in 0..self.n {
            acc.insert(e);
            if !self.is_independent(&acc) {
                acc.remove(e);
            }
        }
        acc
    }

    /// Greedy extension of `base` by elements of `pool` (ascending), stopping
    /// once `target` elements have been added. Returns the added elements.
    pub fn extend_greedy(&self, base: &Mask, pool: &Mask, target: usize) -> Mask {
        let mut acc = base.clone();
        let mut added = Mask::empty(self.n);
        for e in pool.iter() {
            if added.len() == target {
                break;
            }
            if acc.contains(e) {
                continue;
            }
            acc.insert(e);
            if self.is_independent(&acc) {
                added.insert(e);
            } else {
                acc.remove(e);
            }
        }
        added
    }

    /// Per-subset rank table; built on first use. Only available for ground
    /// sets of at most [`EXHAUSTIVE_LIMIT`] elements.
    pub fn rank_table(&self) -> Result<&RankTable> {
        if self.n > EXHAUSTIVE_LIMIT {
            return Err(Error::capability(format!(
                "rank table requested for n = {} > {EXHAUSTIVE_LIMIT}",
                self.n
            )));
        }
        Ok(self.table.get_or_init(|| {
            let n = self.n;
            let size = 1usize << n;
            // greedy[s] = greedy independent subset of s (canonical order);
            // built incrementally from s minus its top element.
            let mut greedy: Vec<u32> = vec![0; size];
            let mut rank: Vec<u8> = vec![0; size];
            for s in 1..size {
                let top = usize::BITS as usize - 1 - s.leading_zeros() as usize;
                let below = s & !(1usize << top);
                let g = greedy[below];
                let candidate = g | (1u32 << top);
                let cmask = Mask::from_bits(n, candidate as u64);
                if self.is_independent(&cmask) {
                    greedy[s] = candidate;
                } else {
                    greedy[s] = g;
                }
                rank[s] = greedy[s].count_ones() as u8;
            }
            RankTable { n, rank }
        }))
    }

    /// Emits every basis in ascending canonical order, stopping with an
    /// overflow error once more than `cap` bases have been produced.
    pub fn enumerate_bases(&self, cap: usize) -> Result<Vec<Mask>> {
        let r = self.full_rank();
        let mut out = Vec::new();
        let mut current = Mask::empty(self.n);
        self.enumerate_rec(&mut current, 0, r, cap, &mut out)?;
        Ok(out)
    }

    fn enumerate_rec(
        &self,
        current: &mut Mask,
        next: usize,
        remaining: usize,
        cap: usize,
        out: &mut Vec<Mask>,
    ) -> Result<()> {
        if remaining == 0 {
            if out.len() == cap {
                return Err(Error::Overflow { cap });
            }
            out.push(current.clone());
            return Ok(());
        }
        if self.n - next < remaining {
            return Ok(());
        }
        for e in next..=self.n - remaining {
            current.insert(e);
            if self.is_independent(current) {
                self.enumerate_rec(current, e + 1, remaining - 1, cap, out)?;
            }
            current.remove(e);
        }
        Ok(())
    }

    /// The minor obtained by contracting `contract` and restricting to
    /// `keep` (both in this matroid's indices, disjoint). The result carries
    /// a `parent_ids` mapping back to this matroid.
    pub fn minor(&self, keep: &Mask, contract: &Mask) -> Result<Matroid> {
        if !keep.is_disjoint_from(contract) {
            return Err(Error::spec("minor keep and contract sets overlap"));
        }
        if !self.is_independent(contract) {
            return Err(Error::spec(
                "contraction set is dependent in the base matroid",
            ));
        }
        let spec = MatroidSpec::Restriction {
            base: Box::new(MatroidSpec::Contraction {
                base: Box::new(self.spec.clone()),
                contract: contract.elements(),
            }),
            keep: {
                // keep indices re-expressed in the contraction's dense ground
                let contract_elems = contract.elements();
                keep.iter()
                    .map(|e| e - contract_elems.iter().filter(|&&c| c < e).count())
                    .collect()
            },
        };
        let mut m = compile(&spec)?;
        m.parent_ids = Some(Arc::new(keep.elements()));
        Ok(m)
    }
}

fn build_oracle(spec: &MatroidSpec) -> Result<Arc<dyn IndependenceOracle>> {
    Ok(match spec {
        MatroidSpec::Uniform { r, .. } => Arc::new(oracles::UniformOracle { rank: *r }),
        MatroidSpec::Partition { blocks, capacities } => {
            let n = spec.ground_size();
            let mut block_of = vec![0usize; n];
            for (bi, block) in blocks.iter().enumerate() {
                for &e in block {
                    block_of[e] = bi;
                }
            }
            Arc::new(oracles::PartitionOracle {
                block_of,
                capacities: capacities.clone(),
            })
        }
        MatroidSpec::Graphic {
            vertex_count,
            edges,
        } => Arc::new(oracles::GraphicOracle {
            vertex_count: *vertex_count,
            edges: edges.clone(),
        }),
        MatroidSpec::Linear { field, matrix } => {
            let n = spec.ground_size();
            match field {
                FieldSpec::Rational => {
                    let columns: Vec<Vec<BigRational>> = (0..n)
                        .map(|j| {
                            matrix
                                .iter()
                                .map(|row| BigRational::from(BigInt::from(row[j])))
                                .collect()
                        })
                        .collect();
                    Arc::new(oracles::LinearRationalOracle { columns })
                }
                FieldSpec::Prime { prime } => {
                    let p = *prime;
                    let columns: Vec<Vec<u64>> = (0..n)
                        .map(|j| {
                            matrix
                                .iter()
                                .map(|row| (row[j].rem_euclid(p as i64)) as u64)
                                .collect()
                        })
                        .collect();
                    Arc::new(oracles::LinearPrimeOracle { p, columns })
                }
            }
        }
        MatroidSpec::Transversal {
            left_size,
            adjacency,
        } => Arc::new(oracles::TransversalOracle {
            left_size: *left_size,
            adjacency: adjacency.clone(),
        }),
        MatroidSpec::DirectSum { parts } => {
            let mut offsets = vec![0usize];
            let mut oracles_vec = Vec::new();
            for p in parts {
                offsets.push(offsets.last().unwrap() + p.ground_size());
                oracles_vec.push(build_oracle(p)?);
            }
            Arc::new(oracles::DirectSumOracle {
                parts: oracles_vec,
                offsets,
            })
        }
        MatroidSpec::Restriction { base, keep } => Arc::new(oracles::RestrictionOracle {
            base: build_oracle(base)?,
            base_n: base.ground_size(),
            keep: keep.clone(),
        }),
        MatroidSpec::Contraction { base, contract } => {
            let base_oracle = build_oracle(base)?;
            let base_n = base.ground_size();
            let cset = Mask::from_elements(base_n, contract.iter().copied());
            if !base_oracle.is_independent(&cset) {
                return Err(Error::spec(
                    "contraction set is dependent in the base matroid",
                ));
            }
            let remaining: Vec<usize> = (0..base_n).filter(|e| !cset.contains(*e)).collect();
            Arc::new(oracles::ContractionOracle {
                base: base_oracle,
                base_n,
                remaining,
                contract: contract.clone(),
            })
        }
    })
}

/// Compile a spec into a matroid whose oracle decides independence for the
/// described family. Malformed specs are rejected with the violated
/// invariant named.
pub fn compile(spec: &MatroidSpec) -> Result<Matroid> {
    spec.validate()?;
    let oracle = build_oracle(spec)?;
    Ok(Matroid {
        n: spec.ground_size(),
        oracle,
        spec: spec.clone(),
        calls: Arc::new(AtomicU64::new(0)),
        rank_full: Arc::new(OnceLock::new()),
        table: Arc::new(OnceLock::new()),
        parent_ids: None,
    })
}

/// Compile an ad-hoc oracle (library-level; mainly for tests of the axiom
/// checker).
pub fn from_oracle(n: usize, oracle: Arc<dyn IndependenceOracle>) -> Matroid {
    Matroid {
        n,
        oracle,
        spec: MatroidSpec::Uniform { n, r: n },
        calls: Arc::new(AtomicU64::new(0)),
        rank_full: Arc::new(OnceLock::new()),
        table: Arc::new(OnceLock::new()),
        parent_ids: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> MatroidSpec {
        MatroidSpec::Graphic {
            vertex_count: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        }
    }

    #[test]
    fn uniform_dependence() {
        let m = compile(&MatroidSpec::Uniform { n: 4, r: 2 }).unwrap();
        assert!(!m.is_independent(&Mask::from_elements(4, [0, 1, 2])));
        assert!(m.is_independent(&Mask::from_elements(4, [0, 3])));
    }

    #[test]
    fn graphic_triangle() {
        let m = compile(&triangle()).unwrap();
        assert!(m.is_independent(&Mask::from_elements(3, [0, 1])));
        assert!(!m.is_independent(&Mask::full(3)));
        assert_eq!(m.rank(&Mask::full(3)), 2);
        assert_eq!(m.greedy_basis().elements(), vec![0, 1]);
    }

    #[test]
    fn linear_rational_dependence() {
        // columns (1,0),(0,1),(1,1): any 3 vectors in dimension 2 are dependent
        let m = compile(&MatroidSpec::Linear {
            field: FieldSpec::Rational,
            matrix: vec![vec![1, 0, 1], vec![0, 1, 1]],
        })
        .unwrap();
        assert!(!m.is_independent(&Mask::full(3)));
        assert!(m.is_independent(&Mask::from_elements(3, [0, 2])));
    }

    #[test]
    fn partition_rank() {
        let m = compile(&MatroidSpec::Partition {
            blocks: vec![vec![0, 1], vec![2, 3]],
            capacities: vec![1, 1],
        })
        .unwrap();
        assert_eq!(m.rank(&Mask::from_elements(4, [0, 1])), 1);
        assert_eq!(m.full_rank(), 2);
    }

    #[test]
    fn uniform_singleton_rank() {
        let m = compile(&MatroidSpec::Uniform { n: 4, r: 2 }).unwrap();
        assert_eq!(m.rank(&Mask::from_elements(4, [0])), 1);
    }

    #[test]
    fn direct_sum_basis() {
        let m = compile(&MatroidSpec::DirectSum {
            parts: vec![
                MatroidSpec::Uniform { n: 2, r: 1 },
                MatroidSpec::Uniform { n: 2, r: 1 },
            ],
        })
        .unwrap();
        assert_eq!(m.greedy_basis().elements(), vec![0, 2]);
    }

    #[test]
    fn enumerate_triangle_trees() {
        let m = compile(&triangle()).unwrap();
        let bases = m.enumerate_bases(100).unwrap();
        let got: Vec<Vec<usize>> = bases.iter().map(|b| b.elements()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn enumerate_overflow() {
        let m = compile(&MatroidSpec::Uniform { n: 3, r: 1 }).unwrap();
        let bases = m.enumerate_bases(10).unwrap();
        assert_eq!(bases.len(), 3);
        assert!(matches!(
            m.enumerate_bases(2),
            Err(Error::Overflow { cap: 2 })
        ));
    }

    #[test]
    fn transversal_matching() {
        // elements 0,1 both only adjacent to left vertex 0: at most one matchable
        let m = compile(&MatroidSpec::Transversal {
            left_size: 2,
            adjacency: vec![vec![0], vec![0], vec![1]],
        })
        .unwrap();
        assert!(m.is_independent(&Mask::from_elements(3, [0, 2])));
        assert!(!m.is_independent(&Mask::from_elements(3, [0, 1])));
        assert_eq!(m.full_rank(), 2);
    }

    #[test]
    fn contraction_requires_independent_set() {
        let spec = MatroidSpec::Contraction {
            base: Box::new(triangle()),
            contract: vec![0, 1, 2],
        };
        assert!(compile(&spec).is_err());
    }

    #[test]
    fn minor_of_triangle() {
        let m = compile(&triangle()).unwrap();
        // contract edge 0, keep edges 1 and 2: both become loops-free singletons,
        // but together they close a cycle with the contracted edge
        let minor = m
            .minor(
                &Mask::from_elements(3, [1, 2]),
                &Mask::from_elements(3, [0]),
            )
            .unwrap();
        assert_eq!(minor.ground_size(), 2);
        assert_eq!(minor.parent_ids(), Some(&[1usize, 2][..]));
        assert!(minor.is_independent(&Mask::from_elements(2, [0])));
        assert!(!minor.is_independent(&Mask::full(2)));
    }

    #[test]
    fn empty_ground_set() {
        let m = compile(&MatroidSpec::Uniform { n: 0, r: 0 }).unwrap();
        assert_eq!(m.full_rank(), 0);
        assert!(m.greedy_basis().is_empty());
        assert_eq!(m.enumerate_bases(4).unwrap().len(), 1);
    }

    #[test]
    fn call_counting_and_fork() {
        let m = compile(&MatroidSpec::Uniform { n: 4, r: 2 }).unwrap();
        m.is_independent(&Mask::empty(4));
        assert_eq!(m.oracle_calls(), 1);
        let f = m.fork();
        assert_eq!(f.oracle_calls(), 0);
        f.is_independent(&Mask::empty(4));
        assert_eq!(m.oracle_calls(), 1);
        assert_eq!(f.oracle_calls(), 1);
    }

    #[test]
    fn rank_table_matches_direct_rank() {
        let m = compile(&triangle()).unwrap();
        let t = m.rank_table().unwrap();
        for bits in 0u64..8 {
            let s = Mask::from_bits(3, bits);
            assert_eq!(t.rank_bits(bits), m.rank(&s));
        }
    }
}
