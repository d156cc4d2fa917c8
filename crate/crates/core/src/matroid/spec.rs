//! Declarative matroid descriptions and their validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field over which a linear representation is read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    /// The rationals; matrix entries are integers (column scaling does not
    /// change the matroid, so integer entries lose no generality).
    #[serde(with = "rational_tag")]
    Rational,
    /// GF(p) for a prime p; entries are reduced mod p.
    Prime { prime: u64 },
}

mod rational_tag {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("rational")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<(), D::Error> {
        let tag = String::deserialize(d)?;
        if tag == "rational" {
            Ok(())
        } else {
            Err(serde::de::Error::custom(format!(
                "unknown field tag {tag:?}, expected \"rational\""
            )))
        }
    }
}

/// Description of a matroid, compiled into an independence oracle by
/// [`crate::matroid::compile`].
///
/// Element indices are dense and canonical: element `i` of a spec is always
/// index `i` of the compiled ground set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatroidSpec {
    /// All subsets of cardinality at most `r` over `n` elements.
    Uniform { n: usize, r: usize },
    /// Disjoint blocks covering the ground set, each with a capacity.
    Partition {
        blocks: Vec<Vec<usize>>,
        capacities: Vec<usize>,
    },
    /// Forests of a multigraph; elements are edges in the given order.
    Graphic {
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
    },
    /// Columns of a matrix over the given field.
    Linear {
        field: FieldSpec,
        /// Row-major; column j is element j.
        matrix: Vec<Vec<i64>>,
    },
    /// Partial transversals: element `e` may be matched to any left vertex in
    /// `adjacency[e]`.
    Transversal {
        left_size: usize,
        adjacency: Vec<Vec<usize>>,
    },
    /// Direct sum; element indices of later parts are shifted up.
    DirectSum { parts: Vec<MatroidSpec> },
    /// Restriction to `keep` (re-indexed densely in ascending order).
    Restriction { base: Box<MatroidSpec>, keep: Vec<usize> },
    /// Contraction of an independent set (remaining elements re-indexed
    /// densely in ascending order).
    Contraction {
        base: Box<MatroidSpec>,
        contract: Vec<usize>,
    },
}

impl MatroidSpec {
    /// Ground-set size of the compiled matroid.
    pub fn ground_size(&self) -> usize {
        match self {
            MatroidSpec::Uniform { n, .. } => *n,
            MatroidSpec::Partition { blocks, .. } => blocks.iter().map(Vec::len).sum(),
            MatroidSpec::Graphic { edges, .. } => edges.len(),
            MatroidSpec::Linear { matrix, .. } => matrix.first().map_or(0, Vec::len),
            MatroidSpec::Transversal { adjacency, .. } => adjacency.len(),
            MatroidSpec::DirectSum { parts } => parts.iter().map(MatroidSpec::ground_size).sum(),
            MatroidSpec::Restriction { keep, .. } => keep.len(),
            MatroidSpec::Contraction { base, contract } => {
                base.ground_size().saturating_sub(contract.len())
            }
        }
    }

    /// Structural validation; independence-related preconditions (e.g. the
    /// contraction set being independent) are checked at compile time.
    pub fn validate(&self) -> Result<()> {
        match self {
            MatroidSpec::Uniform { n, r } => {
                if r > n {
                    return Err(Error::spec(format!(
                        "uniform matroid rank {r} exceeds ground size {n}"
                    )));
                }
            }
            MatroidSpec::Partition { blocks, capacities } => {
                if blocks.len() != capacities.len() {
                    return Err(Error::spec(format!(
                        "partition matroid has {} blocks but {} capacities",
                        blocks.len(),
                        capacities.len()
                    )));
                }
                let n = self.ground_size();
                let mut seen = vec![false; n];
                for (bi, block) in blocks.iter().enumerate() {
                    for &e in block {
                        if e >= n {
                            return Err(Error::spec(format!(
                                "partition block {bi} references element {e} outside [0,{n})"
                            )));
                        }
                        if seen[e] {
                            return Err(Error::spec(format!(
                                "partition blocks overlap at element {e}"
                            )));
                        }
                        seen[e] = true;
                    }
                }
                // blocks are disjoint and their sizes sum to n, so they cover E
            }
            MatroidSpec::Graphic {
                vertex_count,
                edges,
            } => {
                for (i, &(u, v)) in edges.iter().enumerate() {
                    if u >= *vertex_count || v >= *vertex_count {
                        return Err(Error::spec(format!(
                            "edge {i} = ({u},{v}) references a vertex outside [0,{vertex_count})"
                        )));
                    }
                }
            }
            MatroidSpec::Linear { field, matrix } => {
                let cols = matrix.first().map_or(0, Vec::len);
                for (i, row) in matrix.iter().enumerate() {
                    if row.len() != cols {
                        return Err(Error::spec(format!(
                            "linear matrix row {i} has {} entries, expected {cols}",
                            row.len()
                        )));
                    }
                }
                if let FieldSpec::Prime { prime } = field {
                    if *prime < 2 || !is_prime_u64(*prime) {
                        return Err(Error::spec(format!("{prime} is not a prime")));
                    }
                }
            }
            MatroidSpec::Transversal {
                left_size,
                adjacency,
            } => {
                for (e, adj) in adjacency.iter().enumerate() {
                    for &l in adj {
                        if l >= *left_size {
                            return Err(Error::spec(format!(
                                "element {e} is adjacent to left vertex {l} outside [0,{left_size})"
                            )));
                        }
                    }
                }
            }
            MatroidSpec::DirectSum { parts } => {
                for p in parts {
                    p.validate()?;
                }
            }
            MatroidSpec::Restriction { base, keep } => {
                base.validate()?;
                let nb = base.ground_size();
                let mut prev: Option<usize> = None;
                for &e in keep {
                    if e >= nb {
                        return Err(Error::spec(format!(
                            "restriction keeps element {e} outside base ground [0,{nb})"
                        )));
                    }
                    if prev.is_some_and(|p| p >= e) {
                        return Err(Error::spec(
                            "restriction keep list must be strictly ascending",
                        ));
                    }
                    prev = Some(e);
                }
            }
            MatroidSpec::Contraction { base, contract } => {
                base.validate()?;
                let nb = base.ground_size();
                let mut prev: Option<usize> = None;
                for &e in contract {
                    if e >= nb {
                        return Err(Error::spec(format!(
                            "contraction of element {e} outside base ground [0,{nb})"
                        )));
                    }
                    if prev.is_some_and(|p| p >= e) {
                        return Err(Error::spec(
                            "contraction list must be strictly ascending",
                        ));
                    }
                    prev = Some(e);
                }
                // independence of the contraction set is checked during compile
            }
        }
        Ok(())
    }
}

pub(crate) fn is_prime_u64(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if x == p {
            return true;
        }
        if x % p == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (x - 1) >> (x - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut t = d;
        let mut y = pow_mod(a, t, x);
        while t != x - 1 && y != 1 && y != x - 1 {
            y = mul_mod(y, y, x);
            t <<= 1;
        }
        if y != x - 1 && t & 1 == 0 {
            if y == 1 {
                continue 'witness;
            }
            return false;
        }
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_partition_overlap() {
        let spec = MatroidSpec::Partition {
            blocks: vec![vec![0, 1], vec![1, 2]],
            capacities: vec![1, 1],
        };
        assert!(matches!(spec.validate(), Err(Error::Spec(_))));
    }

    #[test]
    fn validates_uniform_rank() {
        assert!(MatroidSpec::Uniform { n: 3, r: 4 }.validate().is_err());
        assert!(MatroidSpec::Uniform { n: 3, r: 3 }.validate().is_ok());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(5));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec = MatroidSpec::DirectSum {
            parts: vec![
                MatroidSpec::Uniform { n: 2, r: 1 },
                MatroidSpec::Linear {
                    field: FieldSpec::Rational,
                    matrix: vec![vec![1, 0], vec![0, 1]],
                },
            ],
        };
        let s = serde_json::to_string(&spec).unwrap();
        let back: MatroidSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(spec, back);
    }
}
