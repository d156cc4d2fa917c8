//! The exact-weight basis solver: LP vertex, proximity window, count-vector
//! enumeration, partition-matroid intersection; plus the brute-force
//! reference oracle.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num::{BigInt, BigRational, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::intersect::common_basis_with_counts;
use crate::lp::{lp_vertex, LpSolution, RationalPoint};
use crate::mask::Mask;
use crate::matroid::Matroid;
use crate::weights::{CountVector, WeightMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Found,
    Infeasible,
    /// The search window was exhausted under an override radius smaller than
    /// the proven completeness threshold; feasibility is undecided.
    WindowExhausted,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub oracle_calls: u64,
    pub lp_pivots: u64,
    pub candidates_enumerated: u64,
    pub candidates_tested: u64,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub basis: Option<Mask>,
    pub stats: SolveStats,
    pub window_radius_used: usize,
}

/// Proven proximity radius ceil((2 m delta)^(13 m)), clamped to `n`: a
/// window of radius n already covers every admissible count, so the clamp
/// loses nothing.
pub fn default_radius(m: usize, delta: i64, n: usize) -> usize {
    let base = BigInt::from(2 * m as i64 * delta);
    base.pow(13 * m as u32).to_usize().unwrap_or(usize::MAX).min(n)
}

/// Integer count vectors within `radius` of the per-class sums of `x`,
/// meeting both the cardinality and the weight-target equations, emitted
/// closest-first (ties by class counts). Duplicate-free by construction.
pub fn candidate_counts(
    x: &RationalPoint,
    w: &WeightMatrix,
    rank: usize,
    beta: &[i64],
    radius: usize,
) -> Vec<CountVector> {
    let classes: Vec<(&Vec<i64>, usize, BigRational)> = w
        .classes()
        .iter()
        .map(|(alpha, elems)| {
            let sum: BigRational = elems.iter().map(|&e| x[e].clone()).sum();
            (alpha, elems.len(), sum)
        })
        .collect();
    let k = classes.len();
    let radius_rat = BigRational::from(BigInt::from(radius as i64));

    let ranges: Vec<(i64, i64)> = classes
        .iter()
        .map(|(_, size, sum)| {
            let lo = (sum - &radius_rat).ceil().to_integer().to_i64().unwrap().max(0);
            let hi = (sum + &radius_rat)
                .floor()
                .to_integer()
                .to_i64()
                .unwrap()
                .min(*size as i64);
            (lo, hi)
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Vec::new();
    }

    // suffix reachability bounds for pruning: cardinality and every weight row
    let m = w.m();
    let mut suffix_card = vec![(0i64, 0i64); k + 1];
    let mut suffix_w = vec![vec![(0i64, 0i64); m]; k + 1];
    for i in (0..k).rev() {
        let (lo, hi) = ranges[i];
        suffix_card[i] = (suffix_card[i + 1].0 + lo, suffix_card[i + 1].1 + hi);
        let alpha = classes[i].0;
        for c in 0..m {
            let (a, b) = (alpha[c] * lo, alpha[c] * hi);
            suffix_w[i][c] = (suffix_w[i + 1][c].0 + a.min(b), suffix_w[i + 1][c].1 + a.max(b));
        }
    }

    let mut out: Vec<(BigRational, Vec<usize>)> = Vec::new();
    let mut state = DfsState {
        classes: &classes,
        ranges: &ranges,
        suffix_card: &suffix_card,
        suffix_w: &suffix_w,
        beta,
        chosen: vec![0usize; k],
        partial_w: vec![0i64; m],
        out: &mut out,
    };
    state.descend(0, rank as i64);

    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    out.into_iter()
        .map(|(_, ls)| CountVector {
            counts: classes
                .iter()
                .zip(&ls)
                .map(|((alpha, _, _), &l)| ((*alpha).clone(), l))
                .collect::<BTreeMap<_, _>>(),
        })
        .collect()
}

struct DfsState<'a> {
    classes: &'a [(&'a Vec<i64>, usize, BigRational)],
    ranges: &'a [(i64, i64)],
    suffix_card: &'a [(i64, i64)],
    suffix_w: &'a [Vec<(i64, i64)>],
    beta: &'a [i64],
    chosen: Vec<usize>,
    partial_w: Vec<i64>,
    out: &'a mut Vec<(BigRational, Vec<usize>)>,
}

impl DfsState<'_> {
    fn descend(&mut self, idx: usize, remaining_card: i64) {
        if idx == self.classes.len() {
            if remaining_card == 0 && self.partial_w.iter().zip(self.beta).all(|(p, b)| p == b) {
                let dist: BigRational = self
                    .classes
                    .iter()
                    .zip(&self.chosen)
                    .map(|((_, _, sum), &l)| {
                        (BigRational::from(BigInt::from(l as i64)) - sum).abs()
                    })
                    .sum();
                self.out.push((dist, self.chosen.clone()));
            }
            return;
        }
        if remaining_card < self.suffix_card[idx].0 || remaining_card > self.suffix_card[idx].1 {
            return;
        }
        for c in 0..self.beta.len() {
            let need = self.beta[c] - self.partial_w[c];
            if need < self.suffix_w[idx][c].0 || need > self.suffix_w[idx][c].1 {
                return;
            }
        }
        let (lo, hi) = self.ranges[idx];
        let alpha = self.classes[idx].0.clone();
        for l in lo..=hi {
            self.chosen[idx] = l as usize;
            for (c, a) in alpha.iter().enumerate() {
                self.partial_w[c] += a * l;
            }
            self.descend(idx + 1, remaining_card - l);
            for (c, a) in alpha.iter().enumerate() {
                self.partial_w[c] -= a * l;
            }
        }
        self.chosen[idx] = 0;
    }
}

/// Find a basis with `W(basis) = beta`, or decide that none exists.
///
/// The LP vertex bounds where the per-class counts of a solution can live;
/// candidates in that window are tried closest-first through matroid
/// intersection. With the default radius (or any override of at least
/// `min(proven bound, n)`) exhaustion proves infeasibility.
pub fn solve(
    m: &Matroid,
    w: &WeightMatrix,
    beta: &[i64],
    radius_override: Option<usize>,
    seed: u64,
) -> Result<SolveReport> {
    solve_sharded(m, w, beta, radius_override, seed, 1)
}

/// [`solve`] with the candidate tests sharded over `jobs` threads. The
/// report is byte-identical to the serial one: the hit with the lowest
/// candidate index wins and statistics cover the as-if-serial prefix.
pub fn solve_sharded(
    m: &Matroid,
    w: &WeightMatrix,
    beta: &[i64],
    radius_override: Option<usize>,
    seed: u64,
    jobs: usize,
) -> Result<SolveReport> {
    let n = m.ground_size();
    if w.n() != n {
        return Err(Error::spec(format!(
            "weight matrix covers {} elements, matroid has {n}",
            w.n()
        )));
    }
    if beta.len() != w.m() {
        return Err(Error::spec(format!(
            "target has {} entries, weight matrix has {} rows",
            beta.len(),
            w.m()
        )));
    }
    let proven = default_radius(w.m(), w.delta(), n);
    let radius = radius_override.unwrap_or(proven).min(n);
    let complete = radius >= proven.min(n);

    let main = m.fork();
    let rank = main.full_rank();
    let lp = lp_vertex(&main, w, beta, seed)?;
    let mut stats = SolveStats {
        lp_pivots: lp.pivots,
        ..Default::default()
    };

    let vertex = match lp.solution {
        LpSolution::Infeasible => {
            stats.oracle_calls = main.oracle_calls();
            return Ok(SolveReport {
                status: SolveStatus::Infeasible,
                basis: None,
                stats,
                window_radius_used: radius,
            });
        }
        LpSolution::Vertex(v) => v,
    };

    let candidates = candidate_counts(&vertex.point, w, rank, beta, radius);
    stats.candidates_enumerated = candidates.len() as u64;
    let lp_calls = main.oracle_calls();

    let (hit, per_candidate) = test_candidates(&main, w, &candidates, jobs)?;

    match hit {
        Some(i) => {
            let basis = per_candidate[i]
                .as_ref()
                .and_then(|(b, _)| b.clone())
                .expect("hit index carries a basis");
            verify_basis(&main, w, beta, &basis, rank)?;
            stats.candidates_tested = i as u64 + 1;
            stats.oracle_calls = lp_calls
                + per_candidate[..=i]
                    .iter()
                    .map(|r| r.as_ref().map_or(0, |(_, c)| *c))
                    .sum::<u64>();
            Ok(SolveReport {
                status: SolveStatus::Found,
                basis: Some(basis),
                stats,
                window_radius_used: radius,
            })
        }
        None => {
            stats.candidates_tested = candidates.len() as u64;
            stats.oracle_calls = lp_calls
                + per_candidate
                    .iter()
                    .map(|r| r.as_ref().map_or(0, |(_, c)| *c))
                    .sum::<u64>();
            Ok(SolveReport {
                status: if complete {
                    SolveStatus::Infeasible
                } else {
                    SolveStatus::WindowExhausted
                },
                basis: None,
                stats,
                window_radius_used: radius,
            })
        }
    }
}

type CandidateOutcome = Option<(Option<Mask>, u64)>;

/// Test candidates in index order (sharded when jobs > 1). Every candidate
/// below the winning index is fully tested, so per-index results are a
/// deterministic function of the inputs regardless of scheduling.
fn test_candidates(
    m: &Matroid,
    w: &WeightMatrix,
    candidates: &[CountVector],
    jobs: usize,
) -> Result<(Option<usize>, Vec<CandidateOutcome>)> {
    let total = candidates.len();
    if total == 0 {
        return Ok((None, Vec::new()));
    }
    let results: Mutex<Vec<CandidateOutcome>> = Mutex::new(vec![None; total]);
    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= total || best.load(Ordering::SeqCst) < i {
            return;
        }
        let handle = m.fork();
        match common_basis_with_counts(&handle, &candidates[i], w) {
            Ok(found) => {
                if found.is_some() {
                    best.fetch_min(i, Ordering::SeqCst);
                }
                results.lock().unwrap()[i] = Some((found, handle.oracle_calls()));
            }
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                best.store(0, Ordering::SeqCst);
                return;
            }
        }
    };

    if jobs <= 1 {
        worker();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(worker);
            }
        });
    }

    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let results = results.into_inner().unwrap();
    let hit = results
        .iter()
        .position(|r| matches!(r, Some((Some(_), _))));
    Ok((hit, results))
}

fn verify_basis(
    m: &Matroid,
    w: &WeightMatrix,
    beta: &[i64],
    basis: &Mask,
    rank: usize,
) -> Result<()> {
    if basis.len() != rank || !m.is_independent(basis) {
        return Err(Error::internal("solver returned a non-basis"));
    }
    if w.weight_of(basis) != beta {
        return Err(Error::internal("solver returned a basis off target"));
    }
    Ok(())
}

const BRUTE_FORCE_LIMIT: usize = 20;

/// Reference oracle: enumerate all bases, return the first exact one in
/// canonical order.
pub fn brute_force_solve(m: &Matroid, w: &WeightMatrix, beta: &[i64]) -> Result<SolveReport> {
    let n = m.ground_size();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::capability(format!(
            "brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {n}"
        )));
    }
    if w.n() != n || beta.len() != w.m() {
        return Err(Error::spec("dimension mismatch"));
    }
    let handle = m.fork();
    let bases = handle.enumerate_bases(usize::MAX)?;
    let mut tested = 0u64;
    let mut hit = None;
    for b in bases.iter() {
        tested += 1;
        if w.weight_of(b) == beta {
            hit = Some(b.clone());
            break;
        }
    }
    Ok(SolveReport {
        status: if hit.is_some() {
            SolveStatus::Found
        } else {
            SolveStatus::Infeasible
        },
        basis: hit,
        stats: SolveStats {
            oracle_calls: handle.oracle_calls(),
            lp_pivots: 0,
            candidates_enumerated: bases.len() as u64,
            candidates_tested: tested,
        },
        window_radius_used: n,
    })
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

    #[test]
    fn radius_formula() {
        // (2*1*1)^13 = 8192, clamped to n
        assert_eq!(default_radius(1, 1, 10_000), 8192);
        assert_eq!(default_radius(1, 1, 6), 6);
        assert_eq!(default_radius(2, 2, 1_000_000), 1_000_000);
    }

    #[test]
    fn candidates_contain_exact_truth_at_any_radius() {
        // x = chi(B) for an exact basis: the true counts appear first
        let w = WeightMatrix::new(vec![vec![0, 1, 1, 2]], 4).unwrap();
        let x = vec![rat(1), rat(0), rat(1), rat(0)];
        for radius in 0..3 {
            let cands = candidate_counts(&x, &w, 2, &[1], radius);
            assert!(!cands.is_empty(), "radius {radius}");
            let first = &cands[0];
            assert_eq!(first.counts[&vec![0]], 1);
            assert_eq!(first.counts[&vec![1]], 1);
            assert_eq!(first.counts[&vec![2]], 0);
        }
    }

    #[test]
    fn candidate_window_example() {
        let w = WeightMatrix::new(vec![vec![0, 1, 2]], 3).unwrap();
        let x = vec![ratf(1, 2), rat(0), ratf(1, 2)];
        let cands = candidate_counts(&x, &w, 1, &[1], 1);
        assert!(cands
            .iter()
            .any(|c| c.counts[&vec![1]] == 1 && c.counts[&vec![0]] == 0 && c.counts[&vec![2]] == 0));
        for c in &cands {
            assert_eq!(c.total(), 1);
            assert_eq!(c.weighted_total(1), vec![BigInt::from(1)]);
        }
    }

    #[test]
    fn radius_zero_fractional_window_empty() {
        let w = WeightMatrix::new(vec![vec![0, 3]], 2).unwrap();
        let x = vec![ratf(1, 2), ratf(1, 2)];
        let cands = candidate_counts(&x, &w, 1, &[2], 0);
        assert!(cands.is_empty());
    }

    #[test]
    fn solve_uniform_examples() {
        let m = compile(&MatroidSpec::Uniform { n: 4, r: 2 }).unwrap();
        let w = WeightMatrix::new(vec![vec![0, 1, 1, 2]], 4).unwrap();
        let found = solve(&m, &w, &[2], None, 3).unwrap();
        assert_eq!(found.status, SolveStatus::Found);
        let b = found.basis.unwrap();
        assert!(b.elements() == vec![0, 3] || b.elements() == vec![1, 2]);

        let infeasible = solve(&m, &w, &[5], None, 3).unwrap();
        assert_eq!(infeasible.status, SolveStatus::Infeasible);
    }

    #[test]
    fn solve_c4_forced_tree() {
        let m = compile(&MatroidSpec::Graphic {
            vertex_count: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        })
        .unwrap();
        let w = WeightMatrix::new(vec![vec![1, 0, 0, 0]], 4).unwrap();
        let report = solve(&m, &w, &[0], None, 1).unwrap();
        assert_eq!(report.status, SolveStatus::Found);
        assert_eq!(report.basis.unwrap().elements(), vec![1, 2, 3]);
    }

    #[test]
    fn window_exhausted_vs_infeasible() {
        // the LP region is the single fractional point (1/2, 1/2): radius 0
        // traps no integer candidate, the full radius proves infeasibility
        let m = compile(&MatroidSpec::Uniform { n: 2, r: 1 }).unwrap();
        let w = WeightMatrix::new(vec![vec![1, 3]], 2).unwrap();
        let r = solve(&m, &w, &[2], Some(0), 5).unwrap();
        assert_eq!(r.status, SolveStatus::WindowExhausted);
        let r = solve(&m, &w, &[2], None, 5).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
    }

    #[test]
    fn brute_force_matches_solve_on_examples() {
        let m = compile(&MatroidSpec::Uniform { n: 4, r: 2 }).unwrap();
        let w = WeightMatrix::new(vec![vec![0, 1, 1, 2]], 4).unwrap();
        for beta in -1..=6 {
            let a = solve(&m, &w, &[beta], None, 9).unwrap();
            let b = brute_force_solve(&m, &w, &[beta]).unwrap();
            assert_eq!(a.status, b.status, "beta {beta}");
            if a.status == SolveStatus::Found {
                assert_eq!(w.weight_of(&a.basis.unwrap()), vec![beta]);
            }
        }
    }

    #[test]
    fn empty_matroid() {
        let m = compile(&MatroidSpec::Uniform { n: 0, r: 0 }).unwrap();
        let w = WeightMatrix::new(vec![vec![]], 0).unwrap();
        let r = brute_force_solve(&m, &w, &[0]).unwrap();
        assert_eq!(r.status, SolveStatus::Found);
        assert!(r.basis.unwrap().is_empty());
        assert_eq!(
            brute_force_solve(&m, &w, &[1]).unwrap().status,
            SolveStatus::Infeasible
        );
        assert_eq!(solve(&m, &w, &[0], None, 0).unwrap().status, SolveStatus::Found);
    }

    #[test]
    fn sharded_report_matches_serial() {
        let m = compile(&MatroidSpec::Graphic {
            vertex_count: 5,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3)],
        })
        .unwrap();
        let w = WeightMatrix::new(vec![vec![1, -1, 0, 1, 0, 1, -1]], 7).unwrap();
        for beta in -2..=3 {
            let serial = solve_sharded(&m, &w, &[beta], None, 4, 1).unwrap();
            let par = solve_sharded(&m, &w, &[beta], None, 4, 4).unwrap();
            assert_eq!(serial.status, par.status);
            assert_eq!(
                serial.basis.as_ref().map(|b| b.elements()),
                par.basis.as_ref().map(|b| b.elements())
            );
            assert_eq!(serial.stats, par.stats, "beta {beta}");
        }
    }
}
