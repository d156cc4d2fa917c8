//! Exchange lab: constructive one-dimensional exchange machinery, empirical
//! checkers for the sensitivity and proximity bounds, and the two
//! matroid-intersection lower-bound families.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intersect::common_with_counts_excluding;
use crate::lp::{lp_vertex, LpSolution};
use crate::mask::Mask;
use crate::matroid::{compile, Matroid, MatroidSpec};
use crate::weights::{CountVector, WeightMatrix};

/// Direction of the per-element weight comparison in an exchange pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightGap {
    /// every a-side weight >= every b-side weight
    AtLeast,
    /// every a-side weight <= every b-side weight
    AtMost,
}

/// A mutually exchangeable pair of subsets: removing `a_side` from the
/// carrier independent set and adding `b_side` stays independent.
#[derive(Clone, Debug)]
pub struct ExchangePair {
    pub a_side: Mask,
    pub b_side: Mask,
    pub unicolor: bool,
    pub weight_gap: WeightGap,
}

/// One bound-check outcome.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub instance: String,
    pub observed: BigRational,
    pub proven_bound: BigInt,
    /// observed / bound, absent when the bound is zero or the check is
    /// vacuous
    pub ratio: Option<BigRational>,
    pub pass: bool,
    /// no exact basis existed, so the bound holds vacuously
    pub vacuous: bool,
}

impl BoundReport {
    fn new(instance: String, observed: BigRational, proven_bound: BigInt) -> BoundReport {
        let pass = observed <= BigRational::from(proven_bound.clone());
        let ratio = if proven_bound.is_zero() {
            None
        } else {
            Some(&observed / BigRational::from(proven_bound.clone()))
        };
        BoundReport {
            instance,
            observed,
            proven_bound,
            ratio,
            pass,
            vacuous: false,
        }
    }

    fn vacuous(instance: String, proven_bound: BigInt) -> BoundReport {
        BoundReport {
            instance,
            observed: BigRational::zero(),
            proven_bound,
            ratio: None,
            pass: true,
            vacuous: true,
        }
    }
}

/// Constructive downsizing: given the exchange (I \ A) + B independent and
/// a subset `a_prime` of A, produce `b_prime` of B of the same size with
/// (I \ a_prime) + b_prime independent, by greedy extension of I \ a_prime
/// from B.
pub fn downsize(
    m: &Matroid,
    carrier: &Mask,
    a: &Mask,
    b: &Mask,
    a_prime: &Mask,
    ) -> Result<Mask> {
    if !a.is_subset_of(carrier) {
        return Err(Error::spec("downsize: A must be inside the carrier"));
    }
    if !b.is_disjoint_from(carrier) {
        return Err(Error::spec("downsize: B must avoid the carrier"));
    }
    if a.len() != b.len() {
        return Err(Error::spec("downsize: |A| and |B| must agree"));
    }
    if !a_prime.is_subset_of(a) {
        return Err(Error::spec("downsize: A' must be a subset of A"));
    }
    let swapped = carrier.difference(a).union(b);
    if !m.is_independent(&swapped) {
        return Err(Error::spec("downsize: (I \\ A) + B must be independent"));
    }
    let start = carrier.difference(a_prime);
    let added = m.extend_greedy(&start, b, a_prime.len());
    if added.len() != a_prime.len() {
        return Err(Error::internal(
            "downsizing extension stalled; the exchange precondition cannot hold",
        ));
    }
    Ok(added)
}

/// The dual form: choose the kept subset of B and get a matching subset of
/// A. From the pair (A, B) on carrier I, returns `a_kept` with
/// (I \ a_kept) + b_prime independent and |a_kept| = |b_prime|.
fn downsize_b_side(m: &Matroid, carrier: &Mask, a: &Mask, b_prime: &Mask) -> Result<Mask> {
    let base = carrier.difference(a).union(b_prime);
    let added = m.extend_greedy(&base, a, a.len() - b_prime.len());
    if added.len() != a.len() - b_prime.len() {
        return Err(Error::internal("b-side downsizing extension stalled"));
    }
    Ok(a.difference(&added))
}

fn weight_of(w: &[i64], s: &Mask) -> i64 {
    s.iter().map(|e| w[e]).sum()
}

/// Unicolor exchangeable pair with dominance `w(a) >= w(b)`, of size at
/// least `(|A| - mu) / (2 delta + 1)^4` with `mu = |w(A) - w(B)|`.
///
/// Follows the constructive chain (weight-sorted ordering, greedy partition
/// of B, pigeonhole over aligned edges, downsizing to unicolor classes) and
/// verifies the result; when the chain's extension step strands a low
/// weight on the A side, a per-class-pair probe (greedy exchange search
/// over all dominant color pairs) restores the guarantee.
pub fn unicolor_exchange(m: &Matroid, w: &[i64], a: &Mask, b: &Mask) -> Result<ExchangePair> {
    validate_pair(m, w, a, b)?;
    let k = a.len();
    let mu = (weight_of(w, a) - weight_of(w, b)).abs();
    let delta = a
        .iter()
        .chain(b.iter())
        .map(|e| w[e].abs())
        .max()
        .unwrap_or(0);
    let needed = required_size(k as i64, mu, delta);

    if let Some(pair) = chain_construction(m, w, a, b)? {
        if pair_is_valid(m, w, a, b, &pair, needed) {
            return Ok(pair);
        }
    }
    let pair = probe_best_pair(m, w, a, b)?;
    if !pair_is_valid(m, w, a, b, &pair, needed) {
        return Err(Error::internal(format!(
            "no unicolor exchange pair of size {needed} exists for k = {k}, mu = {mu}, \
             delta = {delta}; this contradicts the exchange bound"
        )));
    }
    Ok(pair)
}

fn validate_pair(m: &Matroid, w: &[i64], a: &Mask, b: &Mask) -> Result<()> {
    if w.len() != m.ground_size() {
        return Err(Error::spec("weight vector length differs from ground set"));
    }
    if !a.is_disjoint_from(b) {
        return Err(Error::spec("A and B must be disjoint"));
    }
    if a.len() != b.len() {
        return Err(Error::spec("|A| and |B| must agree"));
    }
    if !m.is_independent(a) || !m.is_independent(b) {
        return Err(Error::spec("A and B must both be independent"));
    }
    Ok(())
}

/// ceil((k - mu) / (2 delta + 1)^4), clamped at zero.
fn required_size(k: i64, mu: i64, delta: i64) -> usize {
    let den = (2 * delta + 1).pow(4);
    let num = k - mu;
    if num <= 0 {
        0
    } else {
        ((num + den - 1) / den) as usize
    }
}

/// The direct realization of the ordering/partition/pigeonhole chain.
/// Returns a candidate pair (not necessarily meeting the dominance
/// requirement when the completion step strands light elements in A').
fn chain_construction(m: &Matroid, w: &[i64], a: &Mask, b: &Mask) -> Result<Option<ExchangePair>> {
    let k = a.len();
    if k == 0 {
        return Ok(Some(ExchangePair {
            a_side: Mask::empty(m.ground_size()),
            b_side: Mask::empty(m.ground_size()),
            unicolor: true,
            weight_gap: WeightGap::AtLeast,
        }));
    }
    // level sets of A by weight, and the aligned partition of B:
    // cell_b[j] extends the union of heavier cells of A
    let mut weights: Vec<i64> = a.iter().map(|e| w[e]).collect();
    weights.sort_unstable();
    weights.dedup();
    weights.reverse(); // heavy classes first

    let n = m.ground_size();
    let mut b_remaining = b.clone();
    let mut cells: Vec<(i64, Vec<usize>, Vec<usize>)> = Vec::new(); // (alpha, A_alpha, B_alpha)
    for (idx, &alpha) in weights.iter().enumerate() {
        let a_cell: Vec<usize> = a.iter().filter(|&e| w[e] == alpha).collect();
        // heavier cells of A
        let mut heavier = Mask::empty(n);
        for &h in &weights[..idx] {
            for e in a.iter().filter(|&e| w[e] == h) {
                heavier.insert(e);
            }
        }
        let added = m.extend_greedy(&heavier, &b_remaining, a_cell.len());
        if added.len() != a_cell.len() {
            // the greedy cell assignment stalled; hand over to the probe
            return Ok(None);
        }
        b_remaining = b_remaining.difference(&added);
        cells.push((alpha, a_cell, added.elements()));
    }

    // aligned edges within each cell; pick the cell with the most
    // nonnegative edges (w(a_i) >= w(b_i))
    let mut best: Option<(usize, usize)> = None; // (cell index, nonneg count)
    for (ci, (_, a_cell, b_cell)) in cells.iter().enumerate() {
        let nonneg = a_cell
            .iter()
            .zip(b_cell)
            .filter(|&(&ae, &be)| w[ae] >= w[be])
            .count();
        if best.is_none_or(|(_, c)| nonneg > c) {
            best = Some((ci, nonneg));
        }
    }
    let (ci, _) = best.expect("k > 0 yields at least one cell");
    let (alpha, _, b_cell) = &cells[ci];
    let b_prime = Mask::from_elements(
        n,
        cells[ci]
            .1
            .iter()
            .zip(b_cell)
            .filter(|&(&ae, &be)| w[ae] >= w[be])
            .map(|(_, &be)| be),
    );

    // complete B' + heavier cells to size k from A, preferring light
    // elements so the leftovers sit in the pivot class
    let mut heavier = Mask::empty(n);
    for (other_alpha, a_cell, _) in &cells {
        if *other_alpha > *alpha {
            for &e in a_cell {
                heavier.insert(e);
            }
        }
    }
    let base = b_prime.union(&heavier);
    let pool_sorted: Vec<usize> = {
        let mut v: Vec<usize> = a.difference(&heavier).elements();
        v.sort_by_key(|&e| (w[e], e));
        v
    };
    let mut acc = base.clone();
    for &e in &pool_sorted {
        if acc.len() == k {
            break;
        }
        let candidate = acc.with(e);
        if m.is_independent(&candidate) {
            acc = candidate;
        }
    }
    if acc.len() != k {
        return Ok(None);
    }
    let a_prime = a.difference(&acc);

    // restrict both sides to unicolor classes via downsizing
    let (a_uni, b_uni) = unicolor_restrict(m, w, a, &a_prime, &b_prime)?;
    Ok(Some(ExchangePair {
        a_side: a_uni,
        b_side: b_uni,
        unicolor: true,
        weight_gap: WeightGap::AtLeast,
    }))
}

/// Two downsizing steps: first keep the largest weight class of B', then
/// the largest weight class of the matching A-side.
fn unicolor_restrict(
    m: &Matroid,
    w: &[i64],
    a: &Mask,
    a_prime: &Mask,
    b_prime: &Mask,
) -> Result<(Mask, Mask)> {
    let n = m.ground_size();
    if b_prime.is_empty() {
        return Ok((Mask::empty(n), Mask::empty(n)));
    }
    let largest_class = |s: &Mask| -> i64 {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for e in s.iter() {
            *counts.entry(w[e]).or_insert(0) += 1;
        }
        counts
            .into_iter()
            .max_by_key(|&(wt, c)| (c, wt))
            .map(|(wt, _)| wt)
            .unwrap()
    };
    let gamma = largest_class(b_prime);
    let b2 = Mask::from_elements(n, b_prime.iter().filter(|&e| w[e] == gamma));
    let a2 = downsize_b_side(m, a, a_prime, &b2)?;
    if a2.is_empty() {
        return Ok((Mask::empty(n), Mask::empty(n)));
    }
    let alpha = largest_class(&a2);
    let a3 = Mask::from_elements(n, a2.iter().filter(|&e| w[e] == alpha));
    let b3 = downsize(m, a, &a2, &b2, &a3)?;
    Ok((a3, b3))
}

/// Exhaustive-over-color-pairs probe: for every dominant color pair
/// (alpha >= gamma), greedily find the largest exchangeable unicolor pair,
/// and return the overall best. Complete: if any unicolor dominant pair of
/// some size is exchangeable, the greedy probe of its color pair finds one
/// at least as large.
fn probe_best_pair(m: &Matroid, w: &[i64], a: &Mask, b: &Mask) -> Result<ExchangePair> {
    let n = m.ground_size();
    let mut best: Option<(usize, Mask, Mask)> = None;
    let mut a_colors: Vec<i64> = a.iter().map(|e| w[e]).collect();
    a_colors.sort_unstable();
    a_colors.dedup();
    a_colors.reverse();
    let mut b_colors: Vec<i64> = b.iter().map(|e| w[e]).collect();
    b_colors.sort_unstable();
    b_colors.dedup();
    b_colors.reverse();
    for &alpha in &a_colors {
        for &gamma in &b_colors {
            if gamma > alpha {
                continue;
            }
            let a_class = Mask::from_elements(n, a.iter().filter(|&e| w[e] == alpha));
            let b_class = Mask::from_elements(n, b.iter().filter(|&e| w[e] == gamma));
            // drop the whole A-class, refill from the B-class
            let start = a.difference(&a_class);
            let added = m.extend_greedy(&start, &b_class, a_class.len());
            if added.is_empty() {
                continue;
            }
            // shrink the dropped class back to match
            let base = start.union(&added);
            let refill = m.extend_greedy(&base, &a_class, a_class.len() - added.len());
            let a_side = a_class.difference(&refill);
            if a_side.len() != added.len() {
                return Err(Error::internal("probe refill lost elements"));
            }
            if best.as_ref().is_none_or(|(s, _, _)| added.len() > *s) {
                best = Some((added.len(), a_side, added));
            }
        }
    }
    let (a_side, b_side) = match best {
        Some((_, a_side, b_side)) => (a_side, b_side),
        None => (Mask::empty(n), Mask::empty(n)),
    };
    Ok(ExchangePair {
        a_side,
        b_side,
        unicolor: true,
        weight_gap: WeightGap::AtLeast,
    })
}

fn pair_is_valid(
    m: &Matroid,
    w: &[i64],
    a: &Mask,
    b: &Mask,
    pair: &ExchangePair,
    needed: usize,
) -> bool {
    if pair.a_side.len() != pair.b_side.len() {
        return false;
    }
    if !pair.a_side.is_subset_of(a) || !pair.b_side.is_subset_of(b) {
        return false;
    }
    if pair.a_side.len() < needed {
        return false;
    }
    let swapped = a.difference(&pair.a_side).union(&pair.b_side);
    if !m.is_independent(&swapped) {
        return false;
    }
    let unicolor =
        |s: &Mask| s.iter().map(|e| w[e]).collect::<std::collections::BTreeSet<_>>().len() <= 1;
    if !unicolor(&pair.a_side) || !unicolor(&pair.b_side) {
        return false;
    }
    pair.a_side
        .iter()
        .all(|ae| pair.b_side.iter().all(|be| w[ae] >= w[be]))
}

/// Weight-preserving rescue: a different independent set of the same size
/// and the same weight as `a`, built from one weight-raising and one
/// weight-lowering unicolor exchange balanced through a partition-matroid
/// intersection. Requires `|A| >= (2 delta + 1)^5 + mu`.
pub fn one_dim_rescue(m: &Matroid, w: &[i64], a: &Mask, b: &Mask) -> Result<Mask> {
    validate_pair(m, w, a, b)?;
    let k = a.len();
    let mu = (weight_of(w, a) - weight_of(w, b)).abs();
    let delta = w.iter().map(|v| v.abs()).max().unwrap_or(0);
    let threshold = (2 * delta + 1).pow(5) + mu;
    if (k as i64) < threshold {
        return Err(Error::capability(format!(
            "rescue applies from |A| >= (2 delta + 1)^5 + mu = {threshold}, got {k}"
        )));
    }

    let plus = unicolor_exchange(m, w, a, b)?;
    let neg_w: Vec<i64> = w.iter().map(|v| -v).collect();
    let minus_raw = unicolor_exchange(m, &neg_w, a, b)?;
    let minus = ExchangePair {
        weight_gap: WeightGap::AtMost,
        ..minus_raw
    };

    let color = |s: &Mask| s.iter().next().map(|e| w[e]);
    // p: weight drop per element of the plus exchange; q: weight gain of
    // the minus exchange
    let p = match (color(&plus.a_side), color(&plus.b_side)) {
        (Some(ca), Some(cb)) => ca - cb,
        _ => 0,
    };
    let q = match (color(&minus.a_side), color(&minus.b_side)) {
        (Some(ca), Some(cb)) => cb - ca,
        _ => 0,
    };

    if p == 0 && !plus.a_side.is_empty() {
        let swapped = a.difference(&plus.a_side).union(&plus.b_side);
        return verify_rescue(m, w, a, swapped);
    }
    if q == 0 && !minus.a_side.is_empty() {
        let swapped = a.difference(&minus.a_side).union(&minus.b_side);
        return verify_rescue(m, w, a, swapped);
    }

    if p > 0
        && q > 0
        && plus.a_side.len() >= 2 * q as usize
        && minus.a_side.len() >= 2 * p as usize
    {
        if let Some(found) = balanced_rescue(m, w, a, &plus, &minus, p, q)? {
            return verify_rescue(m, w, a, found);
        }
    }

    // constructive route starved (undersized exchanges for the required
    // downsizing); at desk scale fall back to exhaustive search, whose
    // failure would falsify the size threshold itself
    if let Some(found) = exhaustive_rescue(m, w, a)? {
        return verify_rescue(m, w, a, found);
    }
    Err(Error::internal(
        "no weight-preserving alternative exists above the size threshold",
    ))
}

/// The two-exchange balance: downsize the raising pair to 2q and the
/// lowering pair to 2p, take the half-half fractional point, and ask the
/// partition-matroid intersection for an integral point tight at its class
/// counts, different from A.
fn balanced_rescue(
    m: &Matroid,
    w: &[i64],
    a: &Mask,
    plus: &ExchangePair,
    minus: &ExchangePair,
    p: i64,
    q: i64,
) -> Result<Option<Mask>> {
    let n = m.ground_size();
    let k = a.len();
    let take = |s: &Mask, count: usize| -> Mask {
        Mask::from_elements(n, s.iter().take(count))
    };
    let a_plus = take(&plus.a_side, 2 * q as usize);
    let b_plus = downsize(m, a, &plus.a_side, &plus.b_side, &a_plus)?;
    let a_minus = take(&minus.a_side, 2 * p as usize);
    let b_minus = downsize(m, a, &minus.a_side, &minus.b_side, &a_minus)?;

    let s1 = a.difference(&a_plus).union(&b_plus);
    let s2 = a.difference(&a_minus).union(&b_minus);
    debug_assert_eq!(weight_of(w, &s1) + weight_of(w, &s2), 2 * weight_of(w, a));

    // per-class counts of the midpoint of chi(S1) and chi(S2); integral
    // because the exchanges are unicolor with even cardinalities
    let wm = WeightMatrix::new(vec![w.to_vec()], n)?;
    let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for (alpha, elems) in wm.classes() {
        let c1 = elems.iter().filter(|&&e| s1.contains(e)).count();
        let c2 = elems.iter().filter(|&&e| s2.contains(e)).count();
        if (c1 + c2) % 2 != 0 {
            return Err(Error::internal(
                "midpoint class counts are fractional; unicolor parity was violated",
            ));
        }
        counts.insert(alpha.clone(), (c1 + c2) / 2);
    }
    let cv = CountVector { counts };
    debug_assert_eq!(cv.total(), k);

    let first = common_with_counts_excluding(m, &cv, &wm, None, k)?;
    match first {
        Some(found) if found != *a => Ok(Some(found)),
        _ => {
            // the intersection landed on A itself (or failed); exclude each
            // element of A in turn to force an alternative
            for e in a.iter() {
                if let Some(found) = common_with_counts_excluding(m, &cv, &wm, Some(e), k)? {
                    if found != *a {
                        return Ok(Some(found));
                    }
                }
            }
            Ok(None)
        }
    }
}

const RESCUE_EXHAUSTIVE_LIMIT: usize = 20;

fn exhaustive_rescue(m: &Matroid, w: &[i64], a: &Mask) -> Result<Option<Mask>> {
    let n = m.ground_size();
    if n > RESCUE_EXHAUSTIVE_LIMIT {
        return Err(Error::capability(format!(
            "exhaustive rescue fallback is limited to n <= {RESCUE_EXHAUSTIVE_LIMIT}, got {n}"
        )));
    }
    let k = a.len();
    let target = weight_of(w, a);
    let table = m.rank_table()?;
    for bits in 0u64..(1 << n) {
        if bits.count_ones() as usize != k || !table.is_independent_bits(bits) {
            continue;
        }
        let s = Mask::from_bits(n, bits);
        if s != *a && weight_of(w, &s) == target {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn verify_rescue(m: &Matroid, w: &[i64], a: &Mask, found: Mask) -> Result<Mask> {
    if found == *a
        || found.len() != a.len()
        || weight_of(w, &found) != weight_of(w, a)
        || !m.is_independent(&found)
    {
        return Err(Error::internal(
            "rescue produced an invalid alternative independent set",
        ));
    }
    Ok(found)
}

const LAB_EXHAUSTIVE_LIMIT: usize = 16;

/// Sensitivity check: the smallest symmetric difference |A' + B| over bases
/// A' of weight W(A), against (2 m delta)^(12 m) * ||W(B) - W(A)||_1.
pub fn min_symdiff_exact(
    m: &Matroid,
    w: &WeightMatrix,
    a: &Mask,
    b: &Mask,
    instance: String,
) -> Result<BoundReport> {
    let n = m.ground_size();
    if n > LAB_EXHAUSTIVE_LIMIT {
        return Err(Error::capability(format!(
            "sensitivity check is exhaustive and limited to n <= {LAB_EXHAUSTIVE_LIMIT}"
        )));
    }
    let rank = m.full_rank();
    if a.len() != rank || b.len() != rank || !m.is_independent(a) || !m.is_independent(b) {
        return Err(Error::spec("A and B must be bases"));
    }
    let target = w.weight_of(a);
    let l1: i64 = w
        .weight_of(b)
        .iter()
        .zip(&target)
        .map(|(x, y)| (x - y).abs())
        .sum();
    let bound = sensitivity_bound(w.m(), w.delta()) * BigInt::from(l1);
    let observed = m
        .enumerate_bases(usize::MAX)?
        .into_iter()
        .filter(|cand| w.weight_of(cand) == target)
        .map(|cand| cand.symmetric_difference(b).len())
        .min()
        .expect("A itself is always a candidate");
    Ok(BoundReport::new(
        instance,
        BigRational::from(BigInt::from(observed as i64)),
        bound,
    ))
}

pub fn sensitivity_bound(m: usize, delta: i64) -> BigInt {
    BigInt::from(2 * m as i64 * delta).pow(12 * m as u32)
}

pub fn proximity_bound(m: usize, delta: i64) -> BigInt {
    BigInt::from(2 * m as i64 * delta).pow(13 * m as u32)
}

/// Proximity check: distance from an LP vertex to the nearest exact basis,
/// against (2 m delta)^(13 m). Reports a vacuous pass when no exact basis
/// exists.
pub fn proximity_exact(
    m: &Matroid,
    w: &WeightMatrix,
    beta: &[i64],
    seed: u64,
    instance: String,
) -> Result<BoundReport> {
    let n = m.ground_size();
    if n > LAB_EXHAUSTIVE_LIMIT {
        return Err(Error::capability(format!(
            "proximity check is exhaustive and limited to n <= {LAB_EXHAUSTIVE_LIMIT}"
        )));
    }
    let bound = proximity_bound(w.m(), w.delta());
    let exact: Vec<Mask> = m
        .enumerate_bases(usize::MAX)?
        .into_iter()
        .filter(|cand| w.weight_of(cand) == beta)
        .collect();
    if exact.is_empty() {
        return Ok(BoundReport::vacuous(instance, bound));
    }
    let lp = lp_vertex(m, w, beta, seed)?;
    let vertex = match lp.solution {
        LpSolution::Vertex(v) => v,
        LpSolution::Infeasible => {
            return Err(Error::internal(
                "LP infeasible although an exact basis exists",
            ))
        }
    };
    let observed = exact
        .iter()
        .map(|cand| crate::lp::l1_distance_pub(cand, &vertex.point))
        .min()
        .unwrap();
    Ok(BoundReport::new(instance, observed, bound))
}

/// Which lower-bound family to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerBoundKind {
    Sensitivity,
    Proximity,
}

/// A bipartite-matching instance cast as two partition matroids, with the
/// asserted ground-truth quantities.
#[derive(Clone, Debug)]
pub struct LowerBoundInstance {
    pub kind: LowerBoundKind,
    pub n: usize,
    pub left_matroid: MatroidSpec,
    pub right_matroid: MatroidSpec,
    pub weight_row: Vec<i64>,
    /// for the proximity family: the designated fractional vertex
    pub fractional_vertex: Option<Vec<BigRational>>,
    /// for the proximity family: the claimed distance 3n/4
    pub expected_distance: Option<BigRational>,
}

/// Generate the boundary families: an even cycle with one weighted edge
/// (sensitivity: two disjoint common bases whose weights differ), or two
/// cycles with weights placed so the unique exact matching sits at distance
/// 3n/4 from a fractional vertex (proximity).
pub fn lower_bound_instance(kind: LowerBoundKind, n: usize) -> Result<LowerBoundInstance> {
    match kind {
        LowerBoundKind::Sensitivity => {
            if n < 2 || n % 2 != 0 {
                return Err(Error::spec("sensitivity family needs even n >= 2"));
            }
            let (left, right) = cycle_partition_matroids(n, 0);
            let mut weight_row = vec![0i64; n];
            weight_row[0] = 1;
            Ok(LowerBoundInstance {
                kind,
                n,
                left_matroid: merge_partitions(n, &left, &[])?,
                right_matroid: merge_partitions(n, &right, &[])?,
                weight_row,
                fractional_vertex: None,
                expected_distance: None,
            })
        }
        LowerBoundKind::Proximity => {
            if n < 8 || n % 4 != 0 {
                return Err(Error::spec("proximity family needs n >= 8 divisible by 4"));
            }
            let half = n / 2;
            let (l1, r1) = cycle_partition_matroids(half, 0);
            let (l2, r2) = cycle_partition_matroids(half, half);
            let left = merge_partitions(n, &l1, &l2)?;
            let right = merge_partitions(n, &r1, &r2)?;
            let mut weight_row = vec![0i64; n];
            weight_row[0] = 1; // one weighted edge in cycle 1
            weight_row[half] = 1; // two weighted edges in one matching of cycle 2
            weight_row[half + 2] = 1;
            // vertex: zero-weight matching of cycle 1 (odd edges), cycle 2
            // at one half everywhere
            let mut x = vec![BigRational::zero(); n];
            for e in 0..half {
                if e % 2 == 1 {
                    x[e] = BigRational::one();
                }
            }
            for e in half..n {
                x[e] = BigRational::new(BigInt::one(), BigInt::from(2));
            }
            let expected = BigRational::from(BigInt::from(3 * n as i64 / 4));
            Ok(LowerBoundInstance {
                kind,
                n,
                left_matroid: left,
                right_matroid: right,
                weight_row,
                fractional_vertex: Some(x),
                expected_distance: Some(expected),
            })
        }
    }
}

/// Degree-one partition matroids of an even cycle whose edges are indexed
/// `offset .. offset + len` inside a ground set reached by the caller:
/// blocks collect the two edges at each left (resp. right) vertex.
fn cycle_partition_matroids(len: usize, offset: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let half = len / 2;
    // edge 2i = (u_i, v_i); edge 2i+1 = (v_i, u_{i+1 mod half})
    let mut left = Vec::with_capacity(half); // u-vertex blocks
    let mut right = Vec::with_capacity(half); // v-vertex blocks
    for i in 0..half {
        let prev_odd = offset + (2 * i + len - 1) % len;
        left.push(vec![offset + 2 * i, prev_odd]);
        right.push(vec![offset + 2 * i, offset + 2 * i + 1]);
    }
    (left, right)
}

fn merge_partitions(
    n: usize,
    a: &[Vec<usize>],
    b: &[Vec<usize>],
) -> Result<MatroidSpec> {
    let blocks: Vec<Vec<usize>> = a.iter().chain(b).cloned().collect();
    let capacities = vec![1usize; blocks.len()];
    let spec = MatroidSpec::Partition { blocks, capacities };
    debug_assert_eq!(spec.ground_size(), n);
    spec.validate()?;
    Ok(spec)
}

impl LowerBoundInstance {
    pub fn compile(&self) -> Result<(Matroid, Matroid)> {
        Ok((compile(&self.left_matroid)?, compile(&self.right_matroid)?))
    }

    /// All common bases (maximum common independent sets of size n/2),
    /// exhaustively.
    pub fn common_bases(&self) -> Result<Vec<Mask>> {
        let (l, r) = self.compile()?;
        let tl = l.rank_table()?;
        let tr = r.rank_table()?;
        let n = self.n;
        let size = n / 2;
        let mut out = Vec::new();
        for bits in 0u64..(1 << n) {
            if bits.count_ones() as usize == size
                && tl.is_independent_bits(bits)
                && tr.is_independent_bits(bits)
            {
                out.push(Mask::from_bits(n, bits));
            }
        }
        Ok(out)
    }

    pub fn weight(&self, s: &Mask) -> i64 {
        s.iter().map(|e| self.weight_row[e]).sum()
    }

    /// Check every asserted ground-truth quantity; errors carry the first
    /// broken claim.
    pub fn verify(&self) -> Result<BoundReport> {
        let bases = self.common_bases()?;
        match self.kind {
            LowerBoundKind::Sensitivity => {
                if bases.len() != 2 {
                    return Err(Error::internal(format!(
                        "expected exactly 2 common bases, found {}",
                        bases.len()
                    )));
                }
                if !bases[0].is_disjoint_from(&bases[1]) {
                    return Err(Error::internal("the two common bases intersect"));
                }
                let mut weights: Vec<i64> = bases.iter().map(|b| self.weight(b)).collect();
                weights.sort_unstable();
                if weights != vec![0, 1] {
                    return Err(Error::internal(format!(
                        "common basis weights are {weights:?}, expected [0, 1]"
                    )));
                }
                // the symmetric difference n demonstrates unbounded growth
                let observed = bases[0].symmetric_difference(&bases[1]).len();
                if observed != self.n {
                    return Err(Error::internal(format!(
                        "symmetric difference is {observed}, expected {}",
                        self.n
                    )));
                }
                Ok(BoundReport::new(
                    format!("lowerbound-sensitivity-n{}", self.n),
                    BigRational::from(BigInt::from(observed as i64)),
                    BigInt::from(self.n as i64),
                ))
            }
            LowerBoundKind::Proximity => {
                let exact: Vec<&Mask> =
                    bases.iter().filter(|b| self.weight(b) == 1).collect();
                if exact.len() != 1 {
                    return Err(Error::internal(format!(
                        "expected a unique exact common basis, found {}",
                        exact.len()
                    )));
                }
                let x = self.fractional_vertex.as_ref().unwrap();
                // the designated point is a common fractional solution
                let (l, r) = self.compile()?;
                for m in [&l, &r] {
                    if crate::lp::separate(m, x)?.is_some() {
                        return Err(Error::internal(
                            "designated vertex violates a degree constraint",
                        ));
                    }
                }
                let wx: BigRational = x
                    .iter()
                    .enumerate()
                    .map(|(e, v)| v * BigRational::from(BigInt::from(self.weight_row[e])))
                    .sum();
                if wx != BigRational::one() {
                    return Err(Error::internal("designated vertex is off the target"));
                }
                let observed = crate::lp::l1_distance_pub(exact[0], x);
                let expected = self.expected_distance.clone().unwrap();
                if observed != expected {
                    return Err(Error::internal(format!(
                        "distance is {observed}, expected {expected}"
                    )));
                }
                Ok(BoundReport::new(
                    format!("lowerbound-proximity-n{}", self.n),
                    observed,
                    BigInt::from(3 * self.n as i64 / 4),
                ))
            }
        }
    }
}

/// The versioned desk-scale matroid catalog used by the bound experiments.
pub fn catalog(max_n: usize) -> Vec<(String, MatroidSpec)> {
    let mut out: Vec<(String, MatroidSpec)> = Vec::new();
    out.push(("uniform-4-2".into(), MatroidSpec::Uniform { n: 4, r: 2 }));
    out.push(("uniform-5-2".into(), MatroidSpec::Uniform { n: 5, r: 2 }));
    out.push(("uniform-6-3".into(), MatroidSpec::Uniform { n: 6, r: 3 }));
    out.push(("uniform-7-3".into(), MatroidSpec::Uniform { n: 7, r: 3 }));
    out.push((
        "graphic-triangle".into(),
        MatroidSpec::Graphic {
            vertex_count: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        },
    ));
    out.push((
        "graphic-c4".into(),
        MatroidSpec::Graphic {
            vertex_count: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        },
    ));
    out.push((
        "graphic-k4".into(),
        MatroidSpec::Graphic {
            vertex_count: 4,
            edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        },
    ));
    out.push((
        "graphic-two-triangles".into(),
        MatroidSpec::Graphic {
            vertex_count: 6,
            edges: vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
        },
    ));
    out.push((
        "graphic-k4-plus-pendant".into(),
        MatroidSpec::Graphic {
            vertex_count: 5,
            edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)],
        },
    ));
    out.push((
        "partition-3x2".into(),
        MatroidSpec::Partition {
            blocks: vec![vec![0, 1], vec![2, 3], vec![4, 5]],
            capacities: vec![1, 1, 1],
        },
    ));
    out.push((
        "partition-uneven".into(),
        MatroidSpec::Partition {
            blocks: vec![vec![0, 1, 2], vec![3, 4], vec![5, 6, 7]],
            capacities: vec![2, 1, 1],
        },
    ));
    out.push((
        "transversal-fan".into(),
        MatroidSpec::Transversal {
            left_size: 3,
            adjacency: vec![vec![0], vec![0, 1], vec![1, 2], vec![2], vec![0, 2]],
        },
    ));
    // fixed random-looking GF(5) representations, matrices pinned by hand
    out.push((
        "linear-gf5-a".into(),
        MatroidSpec::Linear {
            field: crate::matroid::FieldSpec::Prime { prime: 5 },
            matrix: vec![vec![1, 2, 0, 3, 4, 1], vec![0, 1, 1, 2, 0, 3], vec![2, 0, 1, 1, 3, 0]],
        },
    ));
    out.push((
        "linear-gf5-b".into(),
        MatroidSpec::Linear {
            field: crate::matroid::FieldSpec::Prime { prime: 5 },
            matrix: vec![vec![1, 0, 2, 4, 1], vec![3, 1, 0, 2, 2]],
        },
    ));
    out.push((
        "linear-rational".into(),
        MatroidSpec::Linear {
            field: crate::matroid::FieldSpec::Rational,
            matrix: vec![vec![1, 0, 1, 2, -1], vec![0, 1, 1, -1, 2], vec![1, 1, 0, 0, 1]],
        },
    ));
    out.push((
        "graphic-prism".into(),
        MatroidSpec::Graphic {
            vertex_count: 6,
            edges: vec![
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        },
    ));
    out.push((
        "graphic-wheel5".into(),
        MatroidSpec::Graphic {
            vertex_count: 6,
            edges: vec![
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 1),
            ],
        },
    ));
    out.retain(|(_, spec)| spec.ground_size() <= max_n);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, r: usize) -> Matroid {
        compile(&MatroidSpec::Uniform { n, r }).unwrap()
    }

    #[test]
    fn downsize_trivial_cases() {
        let m = uniform(4, 2);
        let i = Mask::from_elements(4, [0, 1]);
        let a = Mask::from_elements(4, [0, 1]);
        let b = Mask::from_elements(4, [2, 3]);
        // A' = A -> B' = B
        let full = downsize(&m, &i, &a, &b, &a).unwrap();
        assert_eq!(full.elements(), vec![2, 3]);
        // A' = {} -> B' = {}
        let empty = downsize(&m, &i, &a, &b, &Mask::empty(4)).unwrap();
        assert!(empty.is_empty());
        // singleton A' gets a singleton B'
        let one = downsize(&m, &i, &a, &b, &Mask::from_elements(4, [0])).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.is_subset_of(&b));
    }

    #[test]
    fn downsize_matches_brute_force_on_random_instances() {
        use rand::Rng;
        let mut rng = crate::rng::stream(3, "downsize-test");
        for _ in 0..60 {
            let n = rng.random_range(4..=9usize);
            let m = random_small_matroid(&mut rng, n);
            let table = m.rank_table().unwrap();
            // find a random valid configuration by rejection
            for _ in 0..40 {
                let i_bits = rng.random_range(0..(1u64 << n));
                if !table.is_independent_bits(i_bits) {
                    continue;
                }
                let i = Mask::from_bits(n, i_bits);
                let a_elems: Vec<usize> =
                    i.iter().filter(|_| rng.random_bool(0.6)).collect();
                let a = Mask::from_elements(n, a_elems.iter().copied());
                let outside: Vec<usize> = (0..n).filter(|e| !i.contains(*e)).collect();
                if outside.len() < a.len() {
                    continue;
                }
                let b = Mask::from_elements(n, outside.into_iter().take(a.len()));
                let swapped = i.difference(&a).union(&b);
                if !table.is_independent_bits(swapped.bits()) {
                    continue;
                }
                let a_prime =
                    Mask::from_elements(n, a.iter().filter(|_| rng.random_bool(0.5)));
                let b_prime = downsize(&m, &i, &a, &b, &a_prime).unwrap();
                assert_eq!(b_prime.len(), a_prime.len());
                assert!(b_prime.is_subset_of(&b));
                let result = i.difference(&a_prime).union(&b_prime);
                assert!(table.is_independent_bits(result.bits()));
                break;
            }
        }
    }

    fn random_small_matroid(rng: &mut impl rand::Rng, n: usize) -> Matroid {
        match rng.random_range(0..3) {
            0 => uniform(n, rng.random_range(1..=n)),
            1 => {
                let v = rng.random_range(3..=5usize);
                let edges = (0..n)
                    .map(|_| (rng.random_range(0..v), rng.random_range(0..v)))
                    .collect();
                compile(&MatroidSpec::Graphic {
                    vertex_count: v,
                    edges,
                })
                .unwrap()
            }
            _ => {
                let k = rng.random_range(1..=3usize);
                let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
                for e in 0..n {
                    blocks[rng.random_range(0..k)].push(e);
                }
                blocks.retain(|b| !b.is_empty());
                let caps = blocks
                    .iter()
                    .map(|b| rng.random_range(1..=b.len()))
                    .collect();
                compile(&MatroidSpec::Partition {
                    blocks,
                    capacities: caps,
                })
                .unwrap()
            }
        }
    }

    #[test]
    fn unicolor_all_zero_weights() {
        let m = uniform(6, 3);
        let a = Mask::from_elements(6, [0, 1, 2]);
        let b = Mask::from_elements(6, [3, 4, 5]);
        let w = vec![0i64; 6];
        let pair = unicolor_exchange(&m, &w, &a, &b).unwrap();
        // delta = 0: bound is k, so the full sides must be exchanged
        assert_eq!(pair.a_side.len(), 3);
        assert_eq!(pair.b_side.len(), 3);
    }

    #[test]
    fn unicolor_spec_example() {
        let m = uniform(6, 3);
        let a = Mask::from_elements(6, [0, 1, 2]);
        let b = Mask::from_elements(6, [3, 4, 5]);
        let w = vec![1, 1, 0, 0, 1, 1];
        let pair = unicolor_exchange(&m, &w, &a, &b).unwrap();
        assert!(!pair.a_side.is_empty());
        // verified properties are checked internally; spot-check dominance
        for ae in pair.a_side.iter() {
            for be in pair.b_side.iter() {
                assert!(w[ae] >= w[be]);
            }
        }
    }

    #[test]
    fn unicolor_random_instances_meet_the_bound() {
        use rand::Rng;
        let mut rng = crate::rng::stream(17, "unicolor-test");
        for trial in 0..80 {
            let half = rng.random_range(1..=5usize);
            let n = 2 * half;
            let m = random_small_matroid(&mut rng, n);
            let a = m.extend_greedy(&Mask::empty(n), &Mask::from_elements(n, 0..half), half);
            let pool = Mask::from_elements(n, half..n);
            let b = m.extend_greedy(&Mask::empty(n), &pool, half);
            if a.len() != b.len() || a.len() != half {
                continue;
            }
            let w: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2i64)).collect();
            let pair = unicolor_exchange(&m, &w, &a, &b).unwrap();
            // all corollary properties rechecked here, independently
            let k = a.len() as i64;
            let mu = (weight_of(&w, &a) - weight_of(&w, &b)).abs();
            let delta = a
                .iter()
                .chain(b.iter())
                .map(|e| w[e].abs())
                .max()
                .unwrap_or(0);
            assert!(
                pair.a_side.len() >= required_size(k, mu, delta),
                "trial {trial}: size {} below bound {}",
                pair.a_side.len(),
                required_size(k, mu, delta)
            );
            let swapped = a.difference(&pair.a_side).union(&pair.b_side);
            assert!(m.is_independent(&swapped), "trial {trial}");
        }
    }

    #[test]
    fn rescue_below_threshold_is_a_capability_error() {
        let m = uniform(6, 3);
        let a = Mask::from_elements(6, [0, 1, 2]);
        let b = Mask::from_elements(6, [3, 4, 5]);
        let w = vec![1, 1, 0, 0, 1, 1];
        // threshold = (2*1+1)^5 = 243 >> 3
        assert!(matches!(
            one_dim_rescue(&m, &w, &a, &b),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn rescue_zero_weights() {
        // all-zero weights, k >= (2*0+1)^5 = 1: any other basis qualifies
        let m = uniform(4, 2);
        let a = Mask::from_elements(4, [0, 1]);
        let b = Mask::from_elements(4, [2, 3]);
        let w = vec![0i64; 4];
        let found = one_dim_rescue(&m, &w, &a, &b).unwrap();
        assert_ne!(found, a);
        assert_eq!(found.len(), 2);
    }

    #[test]
    fn rescue_two_weight_classes_uniform() {
        // big uniform matroid: k = 244 exceeds the 1-delta threshold 243+mu
        // when weights are balanced; use delta=1 with mu=0
        let k = 244usize;
        let n = 2 * k;
        let m = uniform(n, k);
        let a = Mask::from_elements(n, 0..k);
        let b = Mask::from_elements(n, k..n);
        // half the elements weigh 1 in both A and B so the weights match
        let mut w = vec![0i64; n];
        for e in 0..k / 2 {
            w[e] = 1;
        }
        for e in k..k + k / 2 {
            w[e] = 1;
        }
        let found = one_dim_rescue(&m, &w, &a, &b).unwrap();
        assert_ne!(found, a);
        assert_eq!(found.len(), k);
        assert_eq!(weight_of(&w, &found), weight_of(&w, &a));
    }

    #[test]
    fn sensitivity_identical_bases() {
        let m = uniform(4, 2);
        let w = WeightMatrix::new(vec![vec![1, 0, 0, 1]], 4).unwrap();
        let a = Mask::from_elements(4, [0, 1]);
        let report = min_symdiff_exact(&m, &w, &a, &a, "self".into()).unwrap();
        assert!(report.pass);
        assert!(report.observed.is_zero());
    }

    #[test]
    fn sensitivity_c4_example() {
        let m = compile(&MatroidSpec::Graphic {
            vertex_count: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        })
        .unwrap();
        let w = WeightMatrix::new(vec![vec![1, 0, 0, 0]], 4).unwrap();
        let a = Mask::from_elements(4, [1, 2, 3]);
        let b = Mask::from_elements(4, [0, 1, 2]);
        let report = min_symdiff_exact(&m, &w, &a, &b, "c4".into()).unwrap();
        // A is the unique weight-0 tree, so the best distance is |A + B| = 2
        assert_eq!(report.observed, BigRational::from(BigInt::from(2)));
        assert!(report.pass);
    }

    #[test]
    fn proximity_forced_integral() {
        let m = uniform(2, 1);
        let w = WeightMatrix::new(vec![vec![0, 1]], 2).unwrap();
        let report = proximity_exact(&m, &w, &[0], 5, "forced".into()).unwrap();
        assert!(report.pass);
        assert!(report.observed.is_zero());
    }

    #[test]
    fn proximity_fractional_vertex_example() {
        let m = uniform(3, 1);
        let w = WeightMatrix::new(vec![vec![0, 1, 2]], 3).unwrap();
        let report = proximity_exact(&m, &w, &[1], 0, "frac".into()).unwrap();
        assert!(report.pass);
        // the vertex is either integral (distance 0) or (1/2, 0, 1/2) at
        // distance 2 from the unique exact basis {1}
        assert!(
            report.observed.is_zero()
                || report.observed == BigRational::from(BigInt::from(2)),
            "observed {}",
            report.observed
        );
    }

    #[test]
    fn proximity_vacuous_flag() {
        let m = uniform(2, 1);
        let w = WeightMatrix::new(vec![vec![1, 1]], 2).unwrap();
        let report = proximity_exact(&m, &w, &[5], 0, "vacuous".into()).unwrap();
        assert!(report.pass && report.vacuous);
    }

    #[test]
    fn sensitivity_family_small() {
        for n in [2usize, 4, 6, 8] {
            let inst = lower_bound_instance(LowerBoundKind::Sensitivity, n).unwrap();
            let report = inst.verify().unwrap();
            assert!(report.pass, "n = {n}");
        }
        assert!(lower_bound_instance(LowerBoundKind::Sensitivity, 3).is_err());
    }

    #[test]
    fn proximity_family_small() {
        for n in [8usize, 12] {
            let inst = lower_bound_instance(LowerBoundKind::Proximity, n).unwrap();
            let report = inst.verify().unwrap();
            assert!(report.pass, "n = {n}");
            assert_eq!(
                report.observed,
                BigRational::from(BigInt::from(3 * n as i64 / 4))
            );
        }
        assert!(lower_bound_instance(LowerBoundKind::Proximity, 6).is_err());
    }

    #[test]
    fn catalog_members_compile_and_pass_axioms() {
        for (id, spec) in catalog(12) {
            let m = compile(&spec).unwrap_or_else(|e| panic!("{id}: {e}"));
            if m.ground_size() <= 10 {
                assert!(
                    crate::matroid::axioms::check_axioms(&m).unwrap().passed(),
                    "{id}"
                );
            }
        }
    }
}
