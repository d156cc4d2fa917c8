//! The embedded acceptance suite: one callable check per shipped guarantee,
//! used by `exactbasis selftest` and by the `acceptance` integration test.

use std::time::Instant;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::lab;
use crate::lp::{self, LpSolution};
use crate::mask::Mask;
use crate::matroid::{compile, FieldSpec, Matroid, MatroidSpec};
use crate::reduce;
use crate::solver::{self, SolveStatus};
use crate::weights::WeightMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// reduced instance counts for a fast sanity pass
    Quick,
    /// the full advertised counts
    Full,
}

impl Scale {
    fn pick(&self, quick: usize, full: usize) -> usize {
        match self {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    fn pass(name: &str, detail: String) -> CriterionResult {
        CriterionResult {
            name: name.to_string(),
            pass: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> CriterionResult {
        CriterionResult {
            name: name.to_string(),
            pass: false,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} - {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }

    pub fn summary(&self) -> String {
        format!("{}: {}", if self.pass { "pass" } else { "fail" }, self.detail)
    }
}

pub fn run_all(scale: Scale) -> Vec<CriterionResult> {
    vec![
        criterion_oracle_agreement(scale),
        criterion_lp_correctness(scale),
        criterion_proximity_bound(scale),
        criterion_sensitivity_bound(scale),
        criterion_lower_bounds(),
        criterion_algebraic(scale),
        criterion_reductions(scale),
        criterion_aggregation(scale),
        criterion_determinism(),
        criterion_smoke_large(),
    ]
}

/// Deterministic random matroid over every supported family.
pub fn random_matroid_spec(rng: &mut ChaCha12Rng, max_n: usize) -> MatroidSpec {
    let n = rng.random_range(1..=max_n);
    match rng.random_range(0..8) {
        0 => MatroidSpec::Uniform {
            n,
            r: rng.random_range(0..=n),
        },
        1 => {
            let k = rng.random_range(1..=n);
            let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
            for e in 0..n {
                blocks[rng.random_range(0..k)].push(e);
            }
            blocks.retain(|b| !b.is_empty());
            let capacities = blocks
                .iter()
                .map(|b| rng.random_range(0..=b.len()))
                .collect();
            MatroidSpec::Partition {
                blocks,
                capacities,
            }
        }
        2 => {
            let v = rng.random_range(2..=6usize);
            MatroidSpec::Graphic {
                vertex_count: v,
                edges: (0..n)
                    .map(|_| (rng.random_range(0..v), rng.random_range(0..v)))
                    .collect(),
            }
        }
        3 => {
            let r = rng.random_range(1..=4usize);
            MatroidSpec::Linear {
                field: FieldSpec::Rational,
                matrix: (0..r)
                    .map(|_| (0..n).map(|_| rng.random_range(-2..=2i64)).collect())
                    .collect(),
            }
        }
        4 => {
            let r = rng.random_range(1..=4usize);
            let p = *[2u64, 3, 5].get(rng.random_range(0..3)).unwrap();
            MatroidSpec::Linear {
                field: FieldSpec::Prime { prime: p },
                matrix: (0..r)
                    .map(|_| (0..n).map(|_| rng.random_range(0..p as i64)).collect())
                    .collect(),
            }
        }
        5 => {
            let left = rng.random_range(1..=5usize);
            MatroidSpec::Transversal {
                left_size: left,
                adjacency: (0..n)
                    .map(|_| {
                        (0..left)
                            .filter(|_| rng.random_bool(0.4))
                            .collect::<Vec<_>>()
                    })
                    .collect(),
            }
        }
        6 => {
            let split = rng.random_range(1..=n.max(2) - 1).min(n - 1).max(1);
            if n < 2 {
                return MatroidSpec::Uniform { n, r: n };
            }
            MatroidSpec::DirectSum {
                parts: vec![
                    MatroidSpec::Uniform {
                        n: split,
                        r: rng.random_range(0..=split),
                    },
                    MatroidSpec::Graphic {
                        vertex_count: 3,
                        edges: (0..n - split)
                            .map(|_| (rng.random_range(0..3), rng.random_range(0..3)))
                            .collect(),
                    },
                ],
            }
        }
        _ => {
            // a minor of a slightly larger uniform or graphic base
            let extra = rng.random_range(1..=3usize);
            let base_n = n + extra;
            let base = if rng.random_bool(0.5) {
                MatroidSpec::Uniform {
                    n: base_n,
                    r: rng.random_range(1..=base_n),
                }
            } else {
                MatroidSpec::Graphic {
                    vertex_count: rng.random_range(3..=6usize),
                    edges: (0..base_n).map(|_| (0, 1)).collect(),
                }
            };
            // contract one element if independent, then keep n of the rest
            let compiled = compile(&base).expect("base spec is valid");
            let first = Mask::from_elements(base_n, [0]);
            let contract = if compiled.is_independent(&first) {
                vec![0]
            } else {
                vec![]
            };
            let remaining: Vec<usize> = (0..base_n - contract.len()).collect();
            let keep: Vec<usize> = remaining.into_iter().take(n).collect();
            MatroidSpec::Restriction {
                base: Box::new(MatroidSpec::Contraction {
                    base: Box::new(base),
                    contract,
                }),
                keep,
            }
        }
    }
}

fn random_instance(
    rng: &mut ChaCha12Rng,
    max_n: usize,
) -> (MatroidSpec, WeightMatrix, Vec<i64>) {
    let spec = random_matroid_spec(rng, max_n);
    let n = spec.ground_size();
    let m = rng.random_range(1..=2usize);
    let delta = rng.random_range(1..=2i64);
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(-delta..=delta)).collect())
        .collect();
    let w = WeightMatrix::new(rows, n).expect("row lengths match by construction");
    // mix feasible targets (weight of some basis) with arbitrary ones
    let beta: Vec<i64> = if rng.random_bool(0.6) {
        let compiled = compile(&spec).expect("spec is valid");
        let basis = compiled.greedy_basis();
        w.weight_of(&basis)
    } else {
        (0..m).map(|_| rng.random_range(-4..=4)).collect()
    };
    (spec, w, beta)
}

/// Oracle agreement: the solver and the basis-enumeration oracle agree on
/// every randomized instance, and every witness is valid.
pub fn criterion_oracle_agreement(scale: Scale) -> CriterionResult {
    let name = "oracle-agreement";
    let count = scale.pick(500, 10_000);
    let start = Instant::now();
    let mut rng = crate::rng::stream(0xA11CE, "acceptance-oracle-agreement");
    for trial in 0..count {
        let (spec, w, beta) = random_instance(&mut rng, 12);
        let m = match compile(&spec) {
            Ok(m) => m,
            Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
        };
        let fast = match solver::solve(&m, &w, &beta, None, trial as u64) {
            Ok(r) => r,
            Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
        };
        let slow = match solver::brute_force_solve(&m, &w, &beta) {
            Ok(r) => r,
            Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
        };
        if fast.status != slow.status {
            return CriterionResult::fail(
                name,
                format!(
                    "trial {trial}: solver says {:?}, enumeration says {:?} on {spec:?} w {:?} beta {beta:?}",
                    fast.status, slow.status, w.rows()
                ),
            );
        }
        if let Some(basis) = &fast.basis {
            if basis.len() != m.full_rank()
                || !m.is_independent(basis)
                || w.weight_of(basis) != beta
            {
                return CriterionResult::fail(name, format!("trial {trial}: invalid witness"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = elapsed.as_secs() < 600;
    let detail = format!(
        "{count} randomized instances, zero disagreements, {:.1}s",
        elapsed.as_secs_f64()
    );
    if pass {
        CriterionResult::pass(name, detail)
    } else {
        CriterionResult::fail(name, format!("{detail} (over the 600s budget)"))
    }
}

/// LP correctness: exact equality, no separating cut, full-rank tight
/// system on feasible instances; infeasible LP implies no exact basis.
pub fn criterion_lp_correctness(scale: Scale) -> CriterionResult {
    let name = "lp-correctness";
    let count = scale.pick(200, 2_000);
    let mut rng = crate::rng::stream(0xB0B, "acceptance-lp");
    let mut feasible = 0usize;
    let mut infeasible = 0usize;
    for trial in 0..count {
        let (spec, w, beta) = random_instance(&mut rng, 12);
        let m = compile(&spec).expect("spec is valid");
        let lp = match lp::lp_vertex(&m, &w, &beta, trial as u64) {
            Ok(o) => o,
            Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
        };
        match lp.solution {
            LpSolution::Vertex(v) => {
                feasible += 1;
                let wx = lp::weight_of_point(&w, &v.point);
                let exact = wx
                    .iter()
                    .zip(&beta)
                    .all(|(got, &want)| *got == BigRational::from(BigInt::from(want)));
                if !exact {
                    return CriterionResult::fail(
                        name,
                        format!("trial {trial}: Wx = beta violated exactly"),
                    );
                }
                match lp::separate(&m, &v.point) {
                    Ok(None) => {}
                    Ok(Some(cut)) => {
                        return CriterionResult::fail(
                            name,
                            format!("trial {trial}: separating cut {:?} exists", cut.subset),
                        )
                    }
                    Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
                }
                if !lp::vertex_tight_system_is_full_rank(&v.point, &w, &v.tight_cuts) {
                    return CriterionResult::fail(
                        name,
                        format!("trial {trial}: tight system is rank-deficient"),
                    );
                }
            }
            LpSolution::Infeasible => {
                infeasible += 1;
                let brute = solver::brute_force_solve(&m, &w, &beta).expect("desk scale");
                if brute.status == SolveStatus::Found {
                    return CriterionResult::fail(
                        name,
                        format!("trial {trial}: LP infeasible but an exact basis exists"),
                    );
                }
            }
        }
    }
    CriterionResult::pass(
        name,
        format!("{count} instances ({feasible} feasible, {infeasible} infeasible), zero exceptions"),
    )
}

/// Proximity bound: observed vertex-to-basis distance within (2 m delta)^13m
/// over the catalog at m = 1, delta = 1.
pub fn criterion_proximity_bound(scale: Scale) -> CriterionResult {
    let name = "proximity-bound";
    let per_instance = scale.pick(3, 10);
    let reports = match crate::cli::lab_proximity_batch(7, per_instance, 14) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(name, e.to_string()),
    };
    let failures = reports.iter().filter(|r| !r.pass).count();
    let max_ratio = reports
        .iter()
        .filter_map(|r| r.ratio.as_ref())
        .max()
        .map(crate::io::rational_string)
        .unwrap_or_else(|| "none".into());
    let detail = format!(
        "{} checks against bound {}, max ratio {max_ratio}",
        reports.len(),
        lab::proximity_bound(1, 1)
    );
    if failures == 0 && !reports.is_empty() {
        CriterionResult::pass(name, detail)
    } else {
        CriterionResult::fail(name, format!("{failures} violations; {detail}"))
    }
}

/// Sensitivity bound: min symmetric difference within
/// (2 m delta)^12m * ||W(B) - W(A)||_1 over catalog basis pairs.
pub fn criterion_sensitivity_bound(scale: Scale) -> CriterionResult {
    let name = "sensitivity-bound";
    let per_instance = scale.pick(3, 10);
    let reports = match crate::cli::lab_sensitivity_batch(5, per_instance, 12) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(name, e.to_string()),
    };
    let failures = reports.iter().filter(|r| !r.pass).count();
    let max_ratio = reports
        .iter()
        .filter_map(|r| r.ratio.as_ref())
        .max()
        .map(crate::io::rational_string)
        .unwrap_or_else(|| "none".into());
    let detail = format!("{} basis pairs, max ratio {max_ratio}", reports.len());
    if failures == 0 && !reports.is_empty() {
        CriterionResult::pass(name, detail)
    } else {
        CriterionResult::fail(name, format!("{failures} violations; {detail}"))
    }
}

/// The boundary families reproduce their stated quantities exactly.
pub fn criterion_lower_bounds() -> CriterionResult {
    let name = "lower-bounds";
    for n in [4usize, 6, 8, 10, 12] {
        let inst = match lab::lower_bound_instance(lab::LowerBoundKind::Sensitivity, n) {
            Ok(i) => i,
            Err(e) => return CriterionResult::fail(name, format!("sensitivity n={n}: {e}")),
        };
        if let Err(e) = inst.verify() {
            return CriterionResult::fail(name, format!("sensitivity n={n}: {e}"));
        }
    }
    for n in [8usize, 12] {
        let inst = match lab::lower_bound_instance(lab::LowerBoundKind::Proximity, n) {
            Ok(i) => i,
            Err(e) => return CriterionResult::fail(name, format!("proximity n={n}: {e}")),
        };
        match inst.verify() {
            Ok(report) => {
                let expected = BigRational::from(BigInt::from(3 * n as i64 / 4));
                if report.observed != expected {
                    return CriterionResult::fail(
                        name,
                        format!("proximity n={n}: distance {} != {expected}", report.observed),
                    );
                }
            }
            Err(e) => return CriterionResult::fail(name, format!("proximity n={n}: {e}")),
        }
    }
    CriterionResult::pass(
        name,
        "sensitivity n in {4,6,8,10,12}: two disjoint exact matchings; proximity n in {8,12}: unique basis at 3n/4".into(),
    )
}

/// Kirchhoff matrix-tree count: the number of spanning trees, computed as
/// an integer Laplacian minor determinant. Independent oracle for the
/// algebraic checks.
pub fn spanning_tree_count(vertex_count: usize, edges: &[(usize, usize)]) -> BigInt {
    if vertex_count <= 1 {
        return BigInt::one();
    }
    let k = vertex_count - 1;
    let mut lap = vec![vec![BigRational::zero(); k]; k];
    for &(u, v) in edges {
        if u == v {
            continue;
        }
        for (a, b) in [(u, v), (v, u)] {
            if a < k {
                lap[a][a] += BigRational::one();
                if b < k {
                    lap[a][b] -= BigRational::one();
                }
            }
        }
    }
    // determinant by fraction-free-ish rational elimination
    let mut det = BigRational::one();
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| !lap[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if piv != col {
            lap.swap(piv, col);
            det = -det;
        }
        det *= lap[col][col].clone();
        let inv = lap[col][col].clone();
        for r in col + 1..k {
            if !lap[r][col].is_zero() {
                let f = &lap[r][col] / &inv;
                for c in col..k {
                    let sub = &f * &lap[col][c];
                    lap[r][c] -= sub;
                }
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

/// Algebraic solver: the K4 support sits at weight 3 with 16 trees, and
/// verdicts match enumeration on random linear instances with at most a
/// 1e-3 one-sided failure rate.
pub fn criterion_algebraic(scale: Scale) -> CriterionResult {
    let name = "algebraic-solver";
    let k4_edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let tree_count = spanning_tree_count(4, &k4_edges);
    if tree_count != BigInt::from(16) {
        return CriterionResult::fail(name, format!("matrix-tree says K4 has {tree_count} trees"));
    }
    let k4 = MatroidSpec::Graphic {
        vertex_count: 4,
        edges: k4_edges,
    };
    let rep = crate::algebraic::LinearRep::from_spec(&k4)
        .expect("graphic matroids have representations")
        .row_basis();
    for seed in 0..5u64 {
        match crate::algebraic::generating_poly(&rep, &[1; 6], seed, None) {
            Ok(poly) => {
                if poly.support_weights() != vec![3] {
                    return CriterionResult::fail(
                        name,
                        format!("seed {seed}: K4 support is {:?}", poly.support_weights()),
                    );
                }
            }
            Err(e) => return CriterionResult::fail(name, format!("seed {seed}: {e}")),
        }
    }

    let instances = scale.pick(120, 1_000);
    let mut rng = crate::rng::stream(0xA16, "acceptance-algebraic");
    let mut checks = 0u64;
    let mut false_negatives = 0u64;
    for trial in 0..instances {
        let r = rng.random_range(1..=5usize);
        let n = rng.random_range(r..=10usize);
        let delta_w = rng.random_range(1..=2i64);
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..n).map(|_| rng.random_range(-2..=2i64)).collect())
            .collect();
        let w: Vec<i64> = (0..n)
            .map(|_| rng.random_range(-delta_w..=delta_w))
            .collect();
        let spec = MatroidSpec::Linear {
            field: FieldSpec::Rational,
            matrix: rows,
        };
        let m = compile(&spec).expect("spec is valid");
        let rep = crate::algebraic::LinearRep::from_spec(&spec)
            .unwrap()
            .row_basis();
        let rank = rep.row_count();
        if rank == 0 {
            continue;
        }
        let attainable: std::collections::BTreeSet<i64> = m
            .enumerate_bases(usize::MAX)
            .expect("desk scale")
            .iter()
            .map(|b| b.iter().map(|e| w[e]).sum())
            .collect();
        let delta = w.iter().map(|v| v.abs()).max().unwrap_or(0);
        for beta in -delta * rank as i64..=delta * rank as i64 {
            checks += 1;
            match crate::algebraic::exact_basis_1d(&rep, &w, beta, trial as u64, 3, None) {
                Ok(Some(basis)) => {
                    let weight: i64 = basis.iter().map(|e| w[e]).sum();
                    if !attainable.contains(&beta) || weight != beta || !m.is_independent(&basis)
                    {
                        return CriterionResult::fail(
                            name,
                            format!("trial {trial} beta {beta}: invalid positive"),
                        );
                    }
                }
                Ok(None) => {
                    if attainable.contains(&beta) {
                        false_negatives += 1;
                    }
                }
                Err(e) => {
                    return CriterionResult::fail(name, format!("trial {trial} beta {beta}: {e}"))
                }
            }
        }
    }
    let rate = false_negatives as f64 / checks.max(1) as f64;
    let detail = format!(
        "K4 support at weight 3 over 5 seeds (16 trees); {instances} random instances, \
         {checks} verdicts, {false_negatives} one-sided misses (rate {rate:.2e})"
    );
    if rate <= 1e-3 {
        CriterionResult::pass(name, detail)
    } else {
        CriterionResult::fail(name, detail)
    }
}

/// Reductions: feasibility round-trips on exhaustively checked originals
/// across all constraint kinds, with valid witness mapping.
pub fn criterion_reductions(scale: Scale) -> CriterionResult {
    let name = "reduction-roundtrips";
    let count = scale.pick(80, 400);
    let mut rng = crate::rng::stream(0x5ED, "acceptance-reductions");
    let mut agreements = 0usize;
    for trial in 0..count {
        let spec = loop {
            let s = random_matroid_spec(&mut rng, 8);
            if compile(&s).is_ok() {
                break s;
            }
        };
        let n = spec.ground_size();
        let mut constraints = Vec::new();
        let how_many = rng.random_range(1..=2usize);
        for _ in 0..how_many {
            let kind = rng.random_range(0..4);
            constraints.push(match kind {
                0 => reduce::ConstraintSpec {
                    kind: reduce::ConstraintKind::LessEqual,
                    weights: (0..n).map(|_| rng.random_range(-2..=2i64)).collect(),
                    target: rng.random_range(-3..=3),
                },
                1 => reduce::ConstraintSpec {
                    kind: reduce::ConstraintKind::GreaterEqual,
                    weights: (0..n).map(|_| rng.random_range(-2..=2i64)).collect(),
                    target: rng.random_range(-3..=3),
                },
                2 => reduce::ConstraintSpec {
                    kind: reduce::ConstraintKind::Equality,
                    weights: (0..n).map(|_| rng.random_range(-2..=2i64)).collect(),
                    target: rng.random_range(-3..=3),
                },
                _ => {
                    let p = rng.random_range(1..=3i64);
                    reduce::ConstraintSpec {
                        kind: reduce::ConstraintKind::Congruence { modulus: p },
                        weights: (0..n).map(|_| rng.random_range(0..p)).collect(),
                        target: rng.random_range(0..p),
                    }
                }
            });
        }
        // every fourth trial goes through the group transcription instead
        if trial % 4 == 0 && n > 0 {
            let factors = rng.random_range(1..=2usize);
            let moduli: Vec<i64> = (0..factors).map(|_| rng.random_range(1..=3i64)).collect();
            let labels: Vec<Vec<i64>> = (0..n)
                .map(|_| moduli.iter().map(|&m| rng.random_range(0..m)).collect())
                .collect();
            let target: Vec<i64> = moduli.iter().map(|&m| rng.random_range(0..m)).collect();
            constraints = match reduce::reduce_group(&moduli, &labels, &target) {
                Ok(c) => c,
                Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
            };
        }
        let original = match reduce::brute_force_constrained(&spec, &constraints) {
            Ok(o) => o,
            Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
        };
        // solve_constrained verifies the witness mapping on every return
        let via_reduction = match reduce::solve_constrained(&spec, &constraints, trial as u64) {
            Ok(o) => o,
            Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
        };
        if original.is_some() != via_reduction.is_some() {
            return CriterionResult::fail(
                name,
                format!(
                    "trial {trial}: feasibility flip on {spec:?} with {constraints:?} \
                     (brute {}, reduced {})",
                    original.is_some(),
                    via_reduction.is_some()
                ),
            );
        }
        agreements += 1;
    }
    CriterionResult::pass(
        name,
        format!("{agreements}/{count} instances agree across all constraint kinds"),
    )
}

/// Aggregation identity: combined(B) = alpha iff distance = gamma and
/// W(B) = beta, exhaustively over bases of random linear instances (m = 2).
pub fn criterion_aggregation(scale: Scale) -> CriterionResult {
    let name = "aggregation-identity";
    let count = scale.pick(25, 100);
    let mut rng = crate::rng::stream(0xA66, "acceptance-aggregation");
    for trial in 0..count {
        let r = rng.random_range(1..=4usize);
        let n = rng.random_range(r.max(2)..=10usize);
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..n).map(|_| rng.random_range(-2..=2i64)).collect())
            .collect();
        let spec = MatroidSpec::Linear {
            field: FieldSpec::Rational,
            matrix: rows,
        };
        let m = compile(&spec).expect("spec is valid");
        let delta = rng.random_range(1..=2i64);
        let w = WeightMatrix::new(
            (0..2)
                .map(|_| (0..n).map(|_| rng.random_range(-delta..=delta)).collect())
                .collect(),
            n,
        )
        .unwrap();
        let bases = m.enumerate_bases(usize::MAX).expect("desk scale");
        if bases.is_empty() {
            continue;
        }
        let beta = w.weight_of(&bases[trial % bases.len()]);
        let lp = lp::lp_vertex(&m, &w, &beta, trial as u64).expect("lp solves");
        let LpSolution::Vertex(v) = lp.solution else {
            return CriterionResult::fail(name, format!("trial {trial}: LP infeasible"));
        };
        let x_round = reduce::round_point(&v.point);
        for gamma in 0..=(2 * n as i64) {
            let agg = match reduce::aggregate_to_1d(&w, &beta, &x_round, gamma) {
                Ok(a) => a,
                Err(e) => return CriterionResult::fail(name, format!("trial {trial}: {e}")),
            };
            for b in &bases {
                let combined: i64 = b.iter().map(|e| agg.combined[e]).sum();
                let dist: i64 = (0..n)
                    .map(|e| (i64::from(b.contains(e)) - x_round[e]).abs())
                    .sum();
                let lhs = combined == agg.alpha;
                let rhs = dist == gamma && w.weight_of(b) == beta;
                if lhs != rhs {
                    return CriterionResult::fail(
                        name,
                        format!("trial {trial} gamma {gamma}: identity broken on {b:?}"),
                    );
                }
            }
        }
    }
    CriterionResult::pass(
        name,
        format!("{count} random linear instances (m = 2), every gamma and basis checked"),
    )
}

/// Determinism: byte-identical result documents for repeated runs and for
/// jobs in {1, 4}.
pub fn criterion_determinism() -> CriterionResult {
    let name = "determinism";
    let dir = std::env::temp_dir().join(format!("exactbasis-selftest-{}", std::process::id()));
    if let Err(e) = std::fs::create_dir_all(&dir) {
        return CriterionResult::fail(name, format!("cannot create temp dir: {e}"));
    }
    let instance = crate::io::InstanceDocument::new(
        MatroidSpec::Graphic {
            vertex_count: 5,
            edges: vec![
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 2),
                (1, 3),
                (2, 4),
            ],
        },
        vec![vec![1, 0, -1, 1, 0, 1, -1, 0]],
        vec![1],
    );
    let path = dir.join("det.json");
    if let Err(e) = std::fs::write(&path, serde_json::to_vec_pretty(&instance).unwrap()) {
        return CriterionResult::fail(name, format!("cannot write instance: {e}"));
    }
    let path_str = path.to_str().unwrap().to_string();
    let mut outputs = Vec::new();
    for jobs in ["1", "4", "1", "4"] {
        let mut buf = Vec::new();
        let code = crate::cli::run(
            [
                "exactbasis",
                "solve",
                "--instance",
                &path_str,
                "--seed",
                "11",
                "--jobs",
                jobs,
            ],
            &mut buf,
        );
        if code != crate::cli::EXIT_OK {
            let _ = std::fs::remove_dir_all(&dir);
            return CriterionResult::fail(name, format!("run with jobs={jobs} exited {code}"));
        }
        outputs.push(buf);
    }
    let _ = std::fs::remove_dir_all(&dir);
    if outputs.windows(2).all(|w| w[0] == w[1]) {
        CriterionResult::pass(name, "solve output byte-identical across runs and jobs {1,4}".into())
    } else {
        CriterionResult::fail(name, "outputs differ across runs or job counts".into())
    }
}

/// Smoke scale: a 200-edge graphic instance solves within the minute
/// budget.
pub fn criterion_smoke_large() -> CriterionResult {
    let name = "smoke-n200";
    let mut rng = crate::rng::stream(0x200, "acceptance-smoke");
    let vertices = 70usize;
    let n = 200usize;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n);
    // random spanning tree first so the graph is connected
    for v in 1..vertices {
        edges.push((rng.random_range(0..v), v));
    }
    while edges.len() < n {
        let a = rng.random_range(0..vertices);
        let b = rng.random_range(0..vertices);
        if a != b {
            edges.push((a, b));
        }
    }
    let spec = MatroidSpec::Graphic {
        vertex_count: vertices,
        edges,
    };
    let m = compile(&spec).expect("spec is valid");
    let row: Vec<i64> = (0..n).map(|_| rng.random_range(-1..=1i64)).collect();
    let w = WeightMatrix::new(vec![row], n).unwrap();
    let beta = w.weight_of(&m.greedy_basis());
    let start = Instant::now();
    let report = match solver::solve(&m, &w, &beta, None, 42) {
        Ok(r) => r,
        Err(e) => return CriterionResult::fail(name, e.to_string()),
    };
    let elapsed = start.elapsed();
    if report.status != SolveStatus::Found {
        return CriterionResult::fail(name, format!("status {:?}", report.status));
    }
    let basis = report.basis.unwrap();
    if w.weight_of(&basis) != beta {
        return CriterionResult::fail(name, "witness off target".into());
    }
    let detail = format!(
        "n = 200 graphic instance solved in {:.1}s ({} lp pivots, {} candidates)",
        elapsed.as_secs_f64(),
        report.stats.lp_pivots,
        report.stats.candidates_tested
    );
    if elapsed.as_secs() < 60 {
        CriterionResult::pass(name, detail)
    } else {
        CriterionResult::fail(name, format!("{detail} (over the 60s budget)"))
    }
}
