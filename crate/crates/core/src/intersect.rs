//! Maximum-cardinality common independent set of two matroids via shortest
//! augmenting paths in the exchange graph.
//!
//! Arcs are generated lazily while the BFS runs, so the number of oracle
//! calls tracks the searched part of the graph rather than a fixed n^2
//! build. The search is deterministic: BFS expands nodes in ascending
//! element order and takes the first source-to-sink path it completes.

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::matroid::Matroid;
use crate::weights::{CountVector, WeightMatrix};

/// Result of a matroid intersection run.
#[derive(Clone, Debug)]
pub struct IntersectionCertificate {
    pub common_set: Mask,
    /// Subset U with |common_set| = rank1(U) + rank2(E \ U); only computed
    /// on request for small ground sets.
    pub partition_witness: Option<Mask>,
}

const CERTIFY_LIMIT: usize = 20;

/// Maximum-cardinality set independent in both matroids.
///
/// With `certify` set (and n <= 20) the min-max witness U is found by
/// exhaustive search and attached to the certificate.
pub fn max_common_independent(
    m1: &Matroid,
    m2: &Matroid,
    certify: bool,
) -> Result<IntersectionCertificate> {
    if m1.ground_size() != m2.ground_size() {
        return Err(Error::spec(format!(
            "ground-size mismatch: {} vs {}",
            m1.ground_size(),
            m2.ground_size()
        )));
    }
    let common_set = run_intersection(m1, m2, None);
    let partition_witness = if certify {
        Some(find_witness(m1, m2, common_set.len())?)
    } else {
        None
    };
    Ok(IntersectionCertificate {
        common_set,
        partition_witness,
    })
}

/// Basis of `m` using exactly `counts[alpha]` elements from each weight
/// class, if one exists. Exactness is forced by cardinality: the counts must
/// sum to rank(m), so a common independent set of that size meets every
/// class capacity with equality.
pub fn common_basis_with_counts(
    m: &Matroid,
    counts: &CountVector,
    w: &WeightMatrix,
) -> Result<Option<Mask>> {
    let rank = m.full_rank();
    if counts.total() != rank {
        return Err(Error::spec(format!(
            "count vector totals {} but rank is {rank}",
            counts.total()
        )));
    }
    for (alpha, &l) in &counts.counts {
        let class_size = w.classes().get(alpha).map_or(0, Vec::len);
        if l > class_size {
            return Err(Error::spec(format!(
                "count {l} for weight class {alpha:?} exceeds its size {class_size}"
            )));
        }
    }
    let caps: Caps = Caps::from_counts(w, counts);
    let result = run_intersection(m, &caps.as_matroid(m.ground_size())?, None);
    if result.len() == rank {
        Ok(Some(result))
    } else {
        Ok(None)
    }
}

/// Like [`common_basis_with_counts`] but with an explicit target size and
/// an optional forbidden element; used by the exchange lab to hunt for
/// common independent sets tight at the class capacities, and for
/// alternative optima.
pub(crate) fn common_with_counts_excluding(
    m: &Matroid,
    counts: &CountVector,
    w: &WeightMatrix,
    forbidden: Option<usize>,
    want: usize,
) -> Result<Option<Mask>> {
    let caps = Caps::from_counts(w, counts);
    let result = run_intersection(m, &caps.as_matroid(m.ground_size())?, forbidden);
    if result.len() == want {
        Ok(Some(result))
    } else {
        Ok(None)
    }
}

struct Caps {
    blocks: Vec<Vec<usize>>,
    capacities: Vec<usize>,
}

impl Caps {
    fn from_counts(w: &WeightMatrix, counts: &CountVector) -> Caps {
        let mut blocks = Vec::new();
        let mut capacities = Vec::new();
        for (alpha, elems) in w.classes() {
            blocks.push(elems.clone());
            capacities.push(counts.counts.get(alpha).copied().unwrap_or(0));
        }
        Caps { blocks, capacities }
    }

    fn as_matroid(&self, n: usize) -> Result<Matroid> {
        crate::matroid::compile(&crate::matroid::MatroidSpec::Partition {
            blocks: self.blocks.clone(),
            capacities: self.capacities.clone(),
        })
        .map(|m| {
            debug_assert_eq!(m.ground_size(), n);
            m
        })
    }
}

/// Core augmenting loop. `forbidden` removes one element from consideration.
fn run_intersection(m1: &Matroid, m2: &Matroid, forbidden: Option<usize>) -> Mask {
    let n = m1.ground_size();
    let mut current = Mask::empty(n);

    // greedy warm start cuts augmentation rounds substantially
    for e in 0..n {
        if Some(e) == forbidden {
            continue;
        }
        let candidate = current.with(e);
        if m1.is_independent(&candidate) && m2.is_independent(&candidate) {
            current = candidate;
        }
    }

    while let Some(path) = augmenting_path(m1, m2, &current, forbidden) {
        debug_assert!(path.len() % 2 == 1);
        let before = current.len();
        for &v in &path {
            if current.contains(v) {
                current.remove(v);
            } else {
                current.insert(v);
            }
        }
        debug_assert_eq!(current.len(), before + 1);
        debug_assert!(m1.is_independent(&current) && m2.is_independent(&current));
    }
    current
}

/// Shortest source-to-sink path in the exchange graph of `current`, or None
/// when no augmenting path exists. Sources are elements addable under m1,
/// sinks those addable under m2; arcs out of the current set test m1-swaps,
/// arcs into it test m2-swaps.
fn augmenting_path(
    m1: &Matroid,
    m2: &Matroid,
    current: &Mask,
    forbidden: Option<usize>,
) -> Option<Vec<usize>> {
    let n = m1.ground_size();
    let usable = |e: usize| Some(e) != forbidden;

    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();

    let mut sources = Vec::new();
    for y in 0..n {
        if usable(y) && !current.contains(y) && m1.is_independent(&current.with(y)) {
            sources.push(y);
        }
    }
    // an element addable under both matroids is a length-1 path
    for &y in &sources {
        if m2.is_independent(&current.with(y)) {
            return Some(vec![y]);
        }
    }
    for &y in &sources {
        seen[y] = true;
        queue.push_back(y);
    }

    while let Some(v) = queue.pop_front() {
        if !current.contains(v) {
            // v is outside: arcs v -> x for x inside with current - x + v in I2
            let swapped_base = current.with(v);
            for x in current.iter() {
                if seen[x] {
                    continue;
                }
                if m2.is_independent(&swapped_base.without(x)) {
                    seen[x] = true;
                    parent[x] = Some(v);
                    queue.push_back(x);
                }
            }
        } else {
            // v is inside: arcs v -> y for y outside with current - v + y in I1
            let removed = current.without(v);
            for y in 0..n {
                if !usable(y) || current.contains(y) || seen[y] {
                    continue;
                }
                if m1.is_independent(&removed.with(y)) {
                    // y reached through an m1-swap; if it is a sink we are done
                    parent[y] = Some(v);
                    if m2.is_independent(&current.with(y)) {
                        let mut path = vec![y];
                        let mut cur = y;
                        while let Some(p) = parent[cur] {
                            path.push(p);
                            cur = p;
                        }
                        return Some(path);
                    }
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    None
}

/// Exhaustive min-max witness: U with rank1(U) + rank2(E \ U) = target.
fn find_witness(m1: &Matroid, m2: &Matroid, target: usize) -> Result<Mask> {
    let n = m1.ground_size();
    if n > CERTIFY_LIMIT {
        return Err(Error::capability(format!(
            "certification is exhaustive and limited to n <= {CERTIFY_LIMIT}, got {n}"
        )));
    }
    let t1 = m1.rank_table()?;
    let t2 = m2.rank_table()?;
    let all: u64 = (1u64 << n) - 1;
    for u in 0..=all {
        if t1.rank_bits(u) + t2.rank_bits(all & !u) == target {
            return Ok(Mask::from_bits(n, u));
        }
    }
    Err(Error::internal(
        "no min-max witness found; intersection result is not maximum",
    ))
}
