//! Constructive rounding: from a feasible point of the base polytope to a
//! nearby basis on the minimal face containing it.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::separate::separate;
use crate::lp::RationalPoint;
use crate::mask::Mask;
use crate::matroid::Matroid;

const FACE_LIMIT: usize = 20;

/// The prime 2^61 - 1. For 0/1 systems of dimension <= 20 every minor is
/// below the Hadamard bound n^(n/2) < q, so ranks computed mod q equal the
/// rational ranks exactly.
const FACE_PRIME: u64 = (1 << 61) - 1;

/// A basis on the minimal face of the base polytope containing `x`,
/// minimizing L1 distance to `x`. The distance is certified to be at most
/// the face dimension. Brute force over bases; desk scale only.
pub fn round_to_face_basis(m: &Matroid, x: &RationalPoint) -> Result<Mask> {
    let n = m.ground_size();
    if n > FACE_LIMIT {
        return Err(Error::capability(format!(
            "face rounding is exhaustive and limited to n <= {FACE_LIMIT}, got {n}"
        )));
    }
    if x.len() != n {
        return Err(Error::spec("point dimension does not match ground set"));
    }
    let rank = m.full_rank();
    let total: BigRational = x.iter().sum();
    if total != BigRational::from(BigInt::from(rank as i64)) {
        return Err(Error::spec(format!(
            "point is not on the base hyperplane: sum = {total}, rank = {rank}"
        )));
    }
    if let Some(cut) = separate(m, x)? {
        return Err(Error::spec(format!(
            "point violates the rank inequality of {:?}",
            cut.subset
        )));
    }
    if n == 0 {
        return Ok(Mask::empty(0));
    }

    // Tight constraints of P_B(M) at x: zero bounds, the cardinality row
    // (always), and every subset with x(S) = rank(S). Upper bounds x_e <= 1
    // are the singleton rank cuts. The scan keeps only rows that grow the
    // span; a basis lies on the minimal face iff it satisfies the kept
    // equalities (the rest are affine combinations of them).
    let table = m.rank_table()?;
    let denom = x.iter().fold(BigInt::one(), |acc, v| {
        num::integer::lcm(acc, v.denom().clone())
    });
    let nums: Vec<BigInt> = x
        .iter()
        .map(|v| v.numer() * (&denom / v.denom()))
        .collect();

    let mut elim = ModEliminator::new(n);
    let mut kept: Vec<(Mask, usize)> = Vec::new(); // (subset row, rhs)

    for (e, v) in x.iter().enumerate() {
        if v.is_zero() {
            let row = Mask::from_elements(n, [e]);
            if elim.add(&row) {
                kept.push((row, 0));
            }
        }
    }
    {
        let row = Mask::full(n);
        if elim.add(&row) {
            kept.push((row, rank));
        }
    }
    let size = 1usize << n;
    let mut sums: Vec<BigInt> = vec![BigInt::zero(); size];
    for s in 1..size {
        let low = s & s.wrapping_neg();
        sums[s] = &sums[s & !low] + &nums[low.trailing_zeros() as usize];
        let r = table.rank_bits(s as u64);
        if sums[s] == BigInt::from(r as i64) * &denom {
            let row = Mask::from_bits(n, s as u64);
            if elim.add(&row) {
                kept.push((row, r));
            }
        }
    }
    let face_dim = n - elim.rank();

    let bases = m.enumerate_bases(usize::MAX)?;
    let mut best: Option<(BigRational, Mask)> = None;
    'bases: for b in bases {
        for (row, rhs) in &kept {
            if b.intersection(row).len() != *rhs {
                continue 'bases;
            }
        }
        let dist = l1_distance(&b, x);
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, b));
        }
    }
    let Some((dist, basis)) = best else {
        return Err(Error::internal(
            "no basis lies on the minimal face of a feasible point",
        ));
    };
    if dist > BigRational::from(BigInt::from(face_dim as i64)) {
        return Err(Error::internal(format!(
            "rounded basis at distance {dist} exceeds face dimension {face_dim}"
        )));
    }
    Ok(basis)
}

/// Dimension of the minimal face of `P_B(M)` containing `x` (the point must
/// be feasible). Exposed for the experiment lab.
pub fn minimal_face_dimension(m: &Matroid, x: &RationalPoint) -> Result<usize> {
    let n = m.ground_size();
    if n > FACE_LIMIT {
        return Err(Error::capability(format!(
            "face dimension is exhaustive and limited to n <= {FACE_LIMIT}, got {n}"
        )));
    }
    let table = m.rank_table()?;
    let denom = x.iter().fold(BigInt::one(), |acc, v| {
        num::integer::lcm(acc, v.denom().clone())
    });
    let nums: Vec<BigInt> = x
        .iter()
        .map(|v| v.numer() * (&denom / v.denom()))
        .collect();
    let mut elim = ModEliminator::new(n);
    for (e, v) in x.iter().enumerate() {
        if v.is_zero() {
            elim.add(&Mask::from_elements(n, [e]));
        }
    }
    elim.add(&Mask::full(n));
    let size = 1usize << n;
    let mut sums: Vec<BigInt> = vec![BigInt::zero(); size];
    for s in 1..size {
        let low = s & s.wrapping_neg();
        sums[s] = &sums[s & !low] + &nums[low.trailing_zeros() as usize];
        if sums[s] == BigInt::from(table.rank_bits(s as u64) as i64) * &denom {
            elim.add(&Mask::from_bits(n, s as u64));
        }
    }
    Ok(n - elim.rank())
}

pub(crate) fn l1_distance(b: &Mask, x: &RationalPoint) -> BigRational {
    x.iter()
        .enumerate()
        .map(|(e, v)| {
            if b.contains(e) {
                (BigRational::one() - v).abs()
            } else {
                v.abs()
            }
        })
        .sum()
}

/// Incremental row space tracker for 0/1 rows, working mod 2^61 - 1 (exact
/// for these dimensions by the Hadamard bound).
struct ModEliminator {
    n: usize,
    /// reduced rows; pivot[i] is the pivot column of rows[i]
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModEliminator {
    fn new(n: usize) -> Self {
        ModEliminator {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce the row against the current span; keep it if independent.
    /// Returns true when the row increased the rank.
    fn add(&mut self, row_mask: &Mask) -> bool {
        const Q: u64 = FACE_PRIME;
        let mut row: Vec<u64> = (0..self.n)
            .map(|e| u64::from(row_mask.contains(e)))
            .collect();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if row[p] != 0 {
                let f = row[p]; // rows are normalized with pivot 1
                for (v, rv) in row.iter_mut().zip(r) {
                    if *rv != 0 {
                        let sub = crate::matroid::spec::mul_mod(f, *rv, Q);
                        *v = (*v + Q - sub) % Q;
                    }
                }
            }
        }
        let Some(p) = row.iter().position(|&v| v != 0) else {
            return false;
        };
        let inv = crate::matroid::spec::pow_mod(row[p], Q - 2, Q);
        for v in row.iter_mut() {
            *v = crate::matroid::spec::mul_mod(*v, inv, Q);
        }
        self.rows.push(row);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{compile, MatroidSpec};

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn ratf(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn triangle() -> Matroid {
        compile(&MatroidSpec::Graphic {
            vertex_count: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        })
        .unwrap()
    }

    #[test]
    fn integral_point_is_its_own_basis() {
        let m = triangle();
        let x = vec![rat(1), rat(1), rat(0)];
        let b = round_to_face_basis(&m, &x).unwrap();
        assert_eq!(b.elements(), vec![0, 1]);
        assert_eq!(minimal_face_dimension(&m, &x).unwrap(), 0);
    }

    #[test]
    fn segment_midpoint_rounds_to_an_endpoint() {
        let m = compile(&MatroidSpec::Uniform { n: 3, r: 1 }).unwrap();
        let x = vec![ratf(1, 2), rat(0), ratf(1, 2)];
        let b = round_to_face_basis(&m, &x).unwrap();
        assert!(b.elements() == vec![0] || b.elements() == vec![2]);
        assert_eq!(l1_distance(&b, &x), rat(1));
        assert_eq!(minimal_face_dimension(&m, &x).unwrap(), 1);
    }

    #[test]
    fn barycenter_of_triangle_trees() {
        let m = triangle();
        let x = vec![ratf(2, 3), ratf(2, 3), ratf(2, 3)];
        let b = round_to_face_basis(&m, &x).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(l1_distance(&b, &x), ratf(4, 3));
        assert_eq!(minimal_face_dimension(&m, &x).unwrap(), 2);
    }

    #[test]
    fn infeasible_point_rejected() {
        let m = compile(&MatroidSpec::Uniform { n: 2, r: 1 }).unwrap();
        assert!(round_to_face_basis(&m, &vec![rat(1), rat(1)]).is_err());
        assert!(round_to_face_basis(&m, &vec![ratf(1, 2), rat(0)]).is_err());
    }
}
