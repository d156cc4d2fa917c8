//! Randomized pseudopolynomial exact-weight basis solver for linear
//! matroids: fold random per-element scalars into a diagonal of monomials
//! `t_e * y^(w(e) + delta)`, evaluate `det(A D(y) A^T)` at enough points,
//! and interpolate. By Cauchy-Binet the coefficient of `y^d` is a sum over
//! bases of shifted weight `d`, nonzero with high probability whenever such
//! a basis exists. A witness basis is extracted by contracting or deleting
//! one element at a time, and always verified over the exact field before
//! being returned: absence is probabilistic, presence is certain.

pub mod field;

use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::matroid::{FieldSpec, MatroidSpec};
use field::{determinant, interpolate, ExtCtx, FieldCtx, PrimeCtx};

/// Default working prime for representations over the rationals.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Minimum field size demanded for comfortable Schwartz-Zippel headroom.
const MIN_FIELD_SIZE: u64 = 1 << 31;

/// An explicit linear representation, columns = elements.
#[derive(Clone, Debug)]
pub enum LinearRep {
    Rational { rows: Vec<Vec<BigInt>> },
    Prime { p: u64, rows: Vec<Vec<u64>> },
}

impl LinearRep {
    /// Representation of a spec, when one is explicit: linear specs as
    /// given; graphic matroids through their vertex-edge incidence matrix
    /// over the rationals.
    pub fn from_spec(spec: &MatroidSpec) -> Option<LinearRep> {
        match spec {
            MatroidSpec::Linear { field, matrix } => match field {
                FieldSpec::Rational => Some(LinearRep::Rational {
                    rows: matrix
                        .iter()
                        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                        .collect(),
                }),
                FieldSpec::Prime { prime } => Some(LinearRep::Prime {
                    p: *prime,
                    rows: matrix
                        .iter()
                        .map(|r| r.iter().map(|&v| v.rem_euclid(*prime as i64) as u64).collect())
                        .collect(),
                }),
            },
            MatroidSpec::Graphic {
                vertex_count,
                edges,
            } => {
                let mut rows = vec![vec![BigInt::zero(); edges.len()]; *vertex_count];
                for (e, &(u, v)) in edges.iter().enumerate() {
                    if u != v {
                        rows[u][e] = BigInt::from(1);
                        rows[v][e] = BigInt::from(-1);
                    }
                }
                Some(LinearRep::Rational { rows })
            }
            _ => None,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            LinearRep::Rational { rows } => rows.first().map_or(0, Vec::len),
            LinearRep::Prime { rows, .. } => rows.first().map_or(0, Vec::len),
        }
    }

    pub fn row_count(&self) -> usize {
        match self {
            LinearRep::Rational { rows } => rows.len(),
            LinearRep::Prime { rows, .. } => rows.len(),
        }
    }

    /// Row-reduce to a full-row-rank representation of the same matroid,
    /// over the exact field.
    pub fn row_basis(&self) -> LinearRep {
        match self {
            LinearRep::Rational { rows } => {
                let mut work: Vec<Vec<BigRational>> = rows
                    .iter()
                    .map(|r| r.iter().map(|v| BigRational::from(v.clone())).collect())
                    .collect();
                let n = self.n();
                let mut rank = 0usize;
                for col in 0..n {
                    let Some(piv) = (rank..work.len()).find(|&i| !work[i][col].is_zero()) else {
                        continue;
                    };
                    work.swap(rank, piv);
                    let inv = work[rank][col].clone();
                    let prow = work[rank].clone();
                    for row in work.iter_mut().skip(rank + 1) {
                        if !row[col].is_zero() {
                            let f = &row[col] / &inv;
                            for (v, p) in row.iter_mut().zip(&prow) {
                                *v -= &f * p;
                            }
                        }
                    }
                    rank += 1;
                }
                work.truncate(rank);
                // clear denominators per row; scaling preserves the matroid
                let rows = work
                    .into_iter()
                    .map(|r| {
                        let lcm = r.iter().fold(BigInt::from(1), |acc, v| {
                            num::integer::lcm(acc, v.denom().clone())
                        });
                        r.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
                    })
                    .collect();
                LinearRep::Rational { rows }
            }
            LinearRep::Prime { p, rows } => {
                let p = *p;
                let mut work = rows.clone();
                let n = self.n();
                let mut rank = 0usize;
                for col in 0..n {
                    let Some(piv) = (rank..work.len()).find(|&i| work[i][col] != 0) else {
                        continue;
                    };
                    work.swap(rank, piv);
                    let inv =
                        crate::matroid::spec::pow_mod(work[rank][col], p - 2, p);
                    let prow = work[rank].clone();
                    for row in work.iter_mut().skip(rank + 1) {
                        if row[col] != 0 {
                            let f = crate::matroid::spec::mul_mod(row[col], inv, p);
                            for (v, pv) in row.iter_mut().zip(&prow) {
                                let sub = crate::matroid::spec::mul_mod(f, *pv, p);
                                *v = (*v + p - sub) % p;
                            }
                        }
                    }
                    rank += 1;
                }
                work.truncate(rank);
                LinearRep::Prime { p, rows: work }
            }
        }
    }

    /// Exact independence check of a column set over the representation's
    /// own field.
    pub fn columns_independent(&self, s: &Mask) -> bool {
        match self {
            LinearRep::Rational { rows } => {
                let cols: Vec<Vec<BigRational>> = s
                    .iter()
                    .map(|e| rows.iter().map(|r| BigRational::from(r[e].clone())).collect())
                    .collect();
                exact_rank(cols) == s.len()
            }
            LinearRep::Prime { p, rows } => {
                let oracle = crate::matroid::MatroidSpec::Linear {
                    field: FieldSpec::Prime { prime: *p },
                    matrix: rows
                        .iter()
                        .map(|r| r.iter().map(|&v| v as i64).collect())
                        .collect(),
                };
                crate::matroid::compile(&oracle)
                    .map(|m| m.is_independent(s))
                    .unwrap_or(false)
            }
        }
    }
}

fn exact_rank(cols: Vec<Vec<BigRational>>) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let rows = cols[0].len();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut rank = 0usize;
    for col in 0..cols.len() {
        let Some(piv) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = a[rank][col].clone();
        let prow = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if !row[col].is_zero() {
                let f = &row[col] / &inv;
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Interpolated basis generating polynomial: coefficient index d covers
/// bases of weight `d - delta * rank`.
#[derive(Clone, Debug)]
pub struct GeneratingPoly {
    pub rank: usize,
    /// exponent shift per element (the largest absolute weight)
    pub delta: i64,
    /// shifted degree -> field element (digit vector; zero = absent weight)
    pub coefficients: Vec<Vec<u64>>,
}

impl GeneratingPoly {
    pub fn degree_bound(&self) -> usize {
        2 * self.delta as usize * self.rank
    }

    pub fn coefficient_nonzero(&self, shifted_degree: usize) -> bool {
        self.coefficients
            .get(shifted_degree)
            .is_some_and(|c| c.iter().any(|&d| d != 0))
    }

    /// Basis weights with (whp) nonzero coefficient, unshifted.
    pub fn support_weights(&self) -> Vec<i64> {
        let shift = self.delta * self.rank as i64;
        (0..self.coefficients.len())
            .filter(|&d| self.coefficient_nonzero(d))
            .map(|d| d as i64 - shift)
            .collect()
    }
}

fn field_for(rep: &LinearRep, prime: Option<u64>, points_needed: u64) -> Result<Box<dyn FieldCtx>> {
    match rep {
        LinearRep::Rational { .. } => {
            let q = prime.unwrap_or(DEFAULT_PRIME);
            let ctx = PrimeCtx::new(q)?;
            if ctx.size() < points_needed {
                return Err(Error::capability(format!(
                    "field GF({q}) has fewer elements than the {points_needed} \
                     evaluation points required"
                )));
            }
            Ok(Box::new(ctx))
        }
        LinearRep::Prime { p, .. } => {
            if *p >= points_needed.max(MIN_FIELD_SIZE) {
                Ok(Box::new(PrimeCtx::new(*p)?))
            } else {
                let ctx = ExtCtx::new(*p, points_needed.max(MIN_FIELD_SIZE))?;
                Ok(Box::new(ctx))
            }
        }
    }
}

fn rows_in_field(rep: &LinearRep, ctx: &dyn FieldCtx) -> Vec<Vec<Vec<u64>>> {
    match rep {
        LinearRep::Rational { rows } => {
            let q = BigInt::from(ctx.size()); // prime ctx only for rationals
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|v| {
                            let m = ((v % &q) + &q) % &q;
                            let digits = m.to_u64_digits().1;
                            vec![digits.first().copied().unwrap_or(0)]
                        })
                        .collect()
                })
                .collect()
        }
        LinearRep::Prime { rows, .. } => rows
            .iter()
            .map(|r| r.iter().map(|&v| ctx.from_i64(v as i64)).collect())
            .collect(),
    }
}

/// Basis generating polynomial of a full-row-rank representation with 1-D
/// integer weights. Rank deficiency is rejected (pre-reduce with
/// [`LinearRep::row_basis`]).
pub fn generating_poly(
    rep: &LinearRep,
    w: &[i64],
    seed: u64,
    prime: Option<u64>,
) -> Result<GeneratingPoly> {
    let n = rep.n();
    if w.len() != n {
        return Err(Error::spec("weight vector length differs from column count"));
    }
    let r = rep.row_count();
    let delta = w.iter().map(|v| v.abs()).max().unwrap_or(0);
    let points = (2 * delta as u64 * r as u64) + 1;
    let ctx = field_for(rep, prime, points)?;
    let a = rows_in_field(rep, ctx.as_ref());
    if field_rank(ctx.as_ref(), &a) != r {
        return Err(Error::spec(format!(
            "representation is rank-deficient: {r} rows are dependent"
        )));
    }
    let mut rng = crate::rng::stream(seed, "algebraic-scalars");
    let scalars: Vec<Vec<u64>> = (0..n).map(|_| ctx.random_nonzero(&mut rng)).collect();
    let coefficients = interpolated_coefficients(ctx.as_ref(), &a, w, delta, &scalars);
    Ok(GeneratingPoly {
        rank: r,
        delta,
        coefficients,
    })
}

fn field_rank(ctx: &dyn FieldCtx, rows: &[Vec<Vec<u64>>]) -> usize {
    let mut work: Vec<Vec<Vec<u64>>> = rows.to_vec();
    let Some(n) = work.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0usize;
    for col in 0..n {
        let Some(piv) = (rank..work.len()).find(|&i| !ctx.is_zero(&work[i][col])) else {
            continue;
        };
        work.swap(rank, piv);
        let inv = ctx.inv(&work[rank][col]);
        let prow = work[rank].clone();
        for row in work.iter_mut().skip(rank + 1) {
            if !ctx.is_zero(&row[col]) {
                let f = ctx.mul(&row[col], &inv);
                for (v, p) in row.iter_mut().zip(&prow) {
                    let sub = ctx.mul(&f, p);
                    *v = ctx.sub(v, &sub);
                }
            }
        }
        rank += 1;
        if rank == work.len() {
            break;
        }
    }
    rank
}

/// Evaluate det(A D(y) A^T) at `2 delta r + 1` points and interpolate.
fn interpolated_coefficients(
    ctx: &dyn FieldCtx,
    a: &[Vec<Vec<u64>>],
    w: &[i64],
    delta: i64,
    scalars: &[Vec<u64>],
) -> Vec<Vec<u64>> {
    let r = a.len();
    let n = a.first().map_or(0, Vec::len);
    let degree = 2 * delta as usize * r;
    let points = degree + 1;
    let mut values = Vec::with_capacity(points);
    for i in 0..points as u64 {
        let y = ctx.nth(i);
        // diagonal entries t_e * y^(w_e + delta)
        let mut diag = Vec::with_capacity(n);
        for e in 0..n {
            let exp = (w[e] + delta) as u64;
            let mut acc = scalars[e].clone();
            let mut base = y.clone();
            let mut k = exp;
            while k > 0 {
                if k & 1 == 1 {
                    acc = ctx.mul(&acc, &base);
                }
                base = ctx.mul(&base, &base);
                k >>= 1;
            }
            diag.push(acc);
        }
        // M = A * D * A^T
        let mut m = vec![vec![ctx.zero(); r]; r];
        for e in 0..n {
            if ctx.is_zero(&diag[e]) {
                continue;
            }
            for i1 in 0..r {
                if ctx.is_zero(&a[i1][e]) {
                    continue;
                }
                let left = ctx.mul(&a[i1][e], &diag[e]);
                for i2 in 0..r {
                    if !ctx.is_zero(&a[i2][e]) {
                        let term = ctx.mul(&left, &a[i2][e]);
                        m[i1][i2] = ctx.add(&m[i1][i2], &term);
                    }
                }
            }
        }
        values.push(determinant(ctx, &mut m));
    }
    interpolate_dyn(ctx, &values)
}

fn interpolate_dyn(ctx: &dyn FieldCtx, values: &[Vec<u64>]) -> Vec<Vec<u64>> {
    interpolate(ctx, values)
}

/// Find a basis of exact 1-D weight `beta`, or decide (whp) that none
/// exists. Absence is judged after `retries` independent generating
/// polynomials all show a zero coefficient; a found basis is verified over
/// the exact field before being returned, retrying on random failure.
pub fn exact_basis_1d(
    rep: &LinearRep,
    w: &[i64],
    beta: i64,
    seed: u64,
    retries: u32,
    prime: Option<u64>,
) -> Result<Option<Mask>> {
    let n = rep.n();
    if w.len() != n {
        return Err(Error::spec("weight vector length differs from column count"));
    }
    let r = rep.row_count();
    let delta = w.iter().map(|v| v.abs()).max().unwrap_or(0);
    let shift = delta * r as i64;
    let target_idx = beta + shift;
    if target_idx < 0 || target_idx > 2 * shift {
        return Ok(None); // outside any attainable basis weight
    }
    let retries = retries.max(1);

    let mut existence_confirmed = false;
    let mut last_failure: Option<String> = None;
    for attempt in 0..retries {
        let attempt_seed = crate::rng::subseed(seed, "algebraic-attempt", attempt as u64);
        let poly = generating_poly(rep, w, attempt_seed, prime)?;
        if !poly.coefficient_nonzero(target_idx as usize) {
            continue;
        }
        existence_confirmed = true;
        match self_reduce(rep, w, beta, delta, attempt_seed, prime)? {
            Some(basis) => {
                // exact verification over the representation's own field
                let weight: i64 = basis.iter().map(|e| w[e]).sum();
                if basis.len() == r && weight == beta && rep.columns_independent(&basis) {
                    return Ok(Some(basis));
                }
                last_failure = Some(format!(
                    "candidate {:?} failed verification (size {}, weight {weight})",
                    basis,
                    basis.len()
                ));
            }
            None => {
                last_failure = Some("self-reduction lost the witness".to_string());
            }
        }
    }
    if existence_confirmed {
        return Err(Error::internal(format!(
            "generating polynomial certifies a basis of weight {beta}, but \
             self-reduction failed across {retries} seeds: {}",
            last_failure.unwrap_or_default()
        )));
    }
    Ok(None)
}

/// Element-by-element contraction/deletion guided by minor generating
/// polynomials. Returns None when a random check lied mid-course.
fn self_reduce(
    rep: &LinearRep,
    w: &[i64],
    beta: i64,
    delta: i64,
    attempt_seed: u64,
    prime: Option<u64>,
) -> Result<Option<Mask>> {
    let n = rep.n();
    let r = rep.row_count();
    let points = (2 * delta as u64 * r as u64) + 1;
    let ctx = field_for(rep, prime, points)?;
    let a0 = rows_in_field(rep, ctx.as_ref());

    let mut rows = a0;
    let mut col_ids: Vec<usize> = (0..n).collect();
    let mut target = beta;
    let mut chosen = Mask::empty(n);
    let mut step = 0u64;

    while !rows.is_empty() {
        if col_ids.is_empty() {
            return Ok(None); // rank left but no columns
        }
        let j = 0; // always decide the lowest remaining column
        let e = col_ids[j];
        let col_zero = rows.iter().all(|row| ctx.is_zero(&row[j]));

        let contract_ok = if col_zero {
            false
        } else {
            let minor = contract_column(ctx.as_ref(), &rows, j);
            let minor_w: Vec<i64> = col_ids
                .iter()
                .enumerate()
                .filter(|&(jj, _)| jj != j)
                .map(|(_, &ee)| w[ee])
                .collect();
            minor_has_weight(
                ctx.as_ref(),
                &minor,
                &minor_w,
                target - w[e],
                delta,
                crate::rng::subseed(attempt_seed, "self-reduce", step * 2),
            )
        };
        step += 1;
        if contract_ok {
            chosen.insert(e);
            target -= w[e];
            rows = contract_column(ctx.as_ref(), &rows, j);
            col_ids.remove(j);
            continue;
        }
        // deletion branch; confirm it still carries the target
        let deleted: Vec<Vec<Vec<u64>>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(jj, _)| jj != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let minor_w: Vec<i64> = col_ids
            .iter()
            .enumerate()
            .filter(|&(jj, _)| jj != j)
            .map(|(_, &ee)| w[ee])
            .collect();
        let delete_ok = minor_has_weight(
            ctx.as_ref(),
            &deleted,
            &minor_w,
            target,
            delta,
            crate::rng::subseed(attempt_seed, "self-reduce", step * 2 + 1),
        );
        step += 1;
        if !delete_ok {
            return Ok(None); // both branches look empty: a check lied earlier
        }
        rows = deleted;
        col_ids.remove(j);
    }
    if target != 0 {
        return Ok(None);
    }
    Ok(Some(chosen))
}

/// Contract the j-th column: pivot it out and drop one row.
fn contract_column(ctx: &dyn FieldCtx, rows: &[Vec<Vec<u64>>], j: usize) -> Vec<Vec<Vec<u64>>> {
    let piv = rows
        .iter()
        .position(|row| !ctx.is_zero(&row[j]))
        .expect("contract_column requires a nonzero column");
    let inv = ctx.inv(&rows[piv][j]);
    let mut out = Vec::with_capacity(rows.len() - 1);
    for (i, row) in rows.iter().enumerate() {
        if i == piv {
            continue;
        }
        if ctx.is_zero(&row[j]) {
            out.push(
                row.iter()
                    .enumerate()
                    .filter(|&(jj, _)| jj != j)
                    .map(|(_, v)| v.clone())
                    .collect(),
            );
        } else {
            let f = ctx.mul(&row[j], &inv);
            out.push(
                row.iter()
                    .enumerate()
                    .filter(|&(jj, _)| jj != j)
                    .map(|(jj, v)| {
                        let sub = ctx.mul(&f, &rows[piv][jj]);
                        ctx.sub(v, &sub)
                    })
                    .collect(),
            );
        }
    }
    out
}

/// Does the minor (assumed full row rank by construction) have a basis of
/// the given weight, according to one random generating polynomial?
fn minor_has_weight(
    ctx: &dyn FieldCtx,
    rows: &[Vec<Vec<u64>>],
    w: &[i64],
    beta: i64,
    delta: i64,
    seed: u64,
) -> bool {
    let r = rows.len();
    if r == 0 {
        return beta == 0;
    }
    let shift = delta * r as i64;
    let idx = beta + shift;
    if idx < 0 || idx > 2 * shift {
        return false;
    }
    let n = rows.first().map_or(0, Vec::len);
    if n < r {
        return false;
    }
    let mut rng = crate::rng::stream(seed, "algebraic-scalars");
    let scalars: Vec<Vec<u64>> = (0..n).map(|_| ctx.random_nonzero(&mut rng)).collect();
    let coeffs = interpolated_coefficients(ctx, rows, w, delta, &scalars);
    coeffs
        .get(idx as usize)
        .is_some_and(|c| c.iter().any(|&d| d != 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::compile;

    fn triangle_rep() -> LinearRep {
        LinearRep::from_spec(&MatroidSpec::Graphic {
            vertex_count: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        })
        .unwrap()
        .row_basis()
    }

    #[test]
    fn triangle_support() {
        // trees weigh 1, 1, 2 under w = (0, 1, 1)
        let rep = triangle_rep();
        assert_eq!(rep.row_count(), 2);
        let poly = generating_poly(&rep, &[0, 1, 1], 11, None).unwrap();
        assert_eq!(poly.support_weights(), vec![1, 2]);
    }

    #[test]
    fn k4_unit_weights_single_support_point() {
        let rep = LinearRep::from_spec(&MatroidSpec::Graphic {
            vertex_count: 4,
            edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        })
        .unwrap()
        .row_basis();
        assert_eq!(rep.row_count(), 3);
        for seed in 0..5 {
            let poly = generating_poly(&rep, &[1; 6], seed, None).unwrap();
            assert_eq!(poly.support_weights(), vec![3], "seed {seed}");
        }
    }

    #[test]
    fn unique_basis_monomial() {
        // invertible 2x2: single basis {0,1} of weight w(0)+w(1)
        let rep = LinearRep::Rational {
            rows: vec![
                vec![BigInt::from(1), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(1)],
            ],
        };
        let poly = generating_poly(&rep, &[-1, 2], 3, None).unwrap();
        assert_eq!(poly.support_weights(), vec![1]);
    }

    #[test]
    fn rank_deficiency_rejected() {
        let rep = LinearRep::Rational {
            rows: vec![
                vec![BigInt::from(1), BigInt::from(2)],
                vec![BigInt::from(2), BigInt::from(4)],
            ],
        };
        assert!(generating_poly(&rep, &[0, 0], 0, None).is_err());
    }

    #[test]
    fn witness_extraction_triangle() {
        let rep = triangle_rep();
        let b = exact_basis_1d(&rep, &[0, 1, 1], 2, 5, 3, None)
            .unwrap()
            .unwrap();
        assert_eq!(b.elements(), vec![1, 2]); // the unique weight-2 tree
        assert!(exact_basis_1d(&rep, &[0, 1, 1], 0, 5, 3, None)
            .unwrap()
            .is_none());
    }

    #[test]
    fn prime_field_small_p_uses_extension() {
        // GF(2) representation of U(3,2)-like matroid: columns (1,0),(0,1),(1,1)
        let rep = LinearRep::Prime {
            p: 2,
            rows: vec![vec![1, 0, 1], vec![0, 1, 1]],
        };
        let poly = generating_poly(&rep, &[0, 1, 1], 1, None).unwrap();
        // bases: {0,1} w=1, {0,2} w=1, {1,2} w=2
        assert_eq!(poly.support_weights(), vec![1, 2]);
        let b = exact_basis_1d(&rep, &[0, 1, 1], 2, 9, 3, None)
            .unwrap()
            .unwrap();
        assert_eq!(b.elements(), vec![1, 2]);
    }

    #[test]
    fn verdicts_match_enumeration_small_random() {
        use rand::Rng;
        let mut rng = crate::rng::stream(77, "algebraic-test");
        for trial in 0..30 {
            let r = rng.random_range(1..=3usize);
            let n = rng.random_range(r..=6usize);
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..n).map(|_| rng.random_range(-2..=2i64)).collect())
                .collect();
            let w: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2i64)).collect();
            let spec = MatroidSpec::Linear {
                field: FieldSpec::Rational,
                matrix: rows.clone(),
            };
            let m = compile(&spec).unwrap();
            if m.full_rank() == 0 {
                continue;
            }
            let rep = LinearRep::from_spec(&spec).unwrap().row_basis();
            let bases = m.enumerate_bases(usize::MAX).unwrap();
            // bases of the full matroid have size full_rank; rep rows = full_rank
            let attainable: std::collections::BTreeSet<i64> = bases
                .iter()
                .filter(|b| b.len() == rep.row_count())
                .map(|b| b.iter().map(|e| w[e]).sum())
                .collect();
            let delta = w.iter().map(|v| v.abs()).max().unwrap_or(0);
            let lo = -delta * rep.row_count() as i64;
            let hi = delta * rep.row_count() as i64;
            for beta in lo..=hi {
                let got = exact_basis_1d(&rep, &w, beta, trial as u64, 3, None).unwrap();
                match got {
                    Some(b) => {
                        assert!(attainable.contains(&beta), "trial {trial} beta {beta}");
                        assert_eq!(b.iter().map(|e| w[e]).sum::<i64>(), beta);
                        assert!(m.is_independent(&b));
                    }
                    None => {
                        assert!(
                            !attainable.contains(&beta),
                            "trial {trial} beta {beta}: false negative"
                        );
                    }
                }
            }
        }
    }
}
