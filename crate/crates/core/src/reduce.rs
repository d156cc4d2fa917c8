//! Constraint reductions that funnel inequalities, congruences, and group
//! constraints into the exact-equality core, the m-to-1 aggregation for
//! linear matroids, and the application wrappers built on them.

use num::{BigInt, BigRational, ToPrimitive};

use crate::algebraic::{exact_basis_1d, LinearRep};
use crate::error::{Error, Result};
use crate::lp::{lp_vertex, LpSolution};
use crate::mask::Mask;
use crate::matroid::{compile, Matroid, MatroidSpec};
use crate::solver::{SolveReport, SolveStats, SolveStatus};
use crate::weights::WeightMatrix;

/// One linear side condition on a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Equality,
    LessEqual,
    GreaterEqual,
    /// weight(B) = target (mod modulus); weights and target must lie in
    /// [0, modulus).
    Congruence { modulus: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSpec {
    pub kind: ConstraintKind,
    pub weights: Vec<i64>,
    pub target: i64,
}

impl ConstraintSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.weights.len() != n {
            return Err(Error::spec(format!(
                "constraint has {} weights, ground set has {n}",
                self.weights.len()
            )));
        }
        if let ConstraintKind::Congruence { modulus } = self.kind {
            if modulus < 1 {
                return Err(Error::spec("congruence modulus must be at least 1"));
            }
            if self.weights.iter().any(|&w| w < 0 || w >= modulus) {
                return Err(Error::spec("congruence weights must lie in [0, modulus)"));
            }
            if self.target < 0 || self.target >= modulus {
                return Err(Error::spec("congruence target must lie in [0, modulus)"));
            }
        }
        Ok(())
    }

    /// Does a subset of the original ground set with this weight satisfy
    /// the constraint?
    pub fn satisfied_by(&self, weight: i64) -> bool {
        match self.kind {
            ConstraintKind::Equality => weight == self.target,
            ConstraintKind::LessEqual => weight <= self.target,
            ConstraintKind::GreaterEqual => weight >= self.target,
            ConstraintKind::Congruence { modulus } => weight.rem_euclid(modulus) == self.target,
        }
    }
}

/// An equality-only instance equivalent to the original constrained one.
/// Original elements keep their indices (`element_map[e] == e`); padding
/// elements carry zero weight in every row but their own.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub matroid_spec: MatroidSpec,
    pub weights: Vec<Vec<i64>>,
    pub target: Vec<i64>,
    pub element_map: Vec<usize>,
    pub original_n: usize,
    original_constraints: Vec<ConstraintSpec>,
}

impl ReducedInstance {
    pub fn weight_matrix(&self) -> Result<WeightMatrix> {
        WeightMatrix::new(self.weights.clone(), self.matroid_spec.ground_size())
    }

    /// Project a reduced solution back to the original ground set,
    /// verifying that it is a basis satisfying every original constraint.
    pub fn extract_original(&self, reduced_basis: &Mask, original: &Matroid) -> Result<Mask> {
        let mut out = Mask::empty(self.original_n);
        for (orig, &red) in self.element_map.iter().enumerate() {
            if reduced_basis.contains(red) {
                out.insert(orig);
            }
        }
        if out.len() != original.full_rank() || !original.is_independent(&out) {
            return Err(Error::internal(
                "reduced solution does not project to an original basis",
            ));
        }
        for c in &self.original_constraints {
            let weight: i64 = out.iter().map(|e| c.weights[e]).sum();
            if !c.satisfied_by(weight) {
                return Err(Error::internal(
                    "reduced solution violates an original constraint",
                ));
            }
        }
        Ok(out)
    }
}

/// Reduce a constraint list over a matroid to an equality instance.
/// Equality rows pass through; each inequality or congruence row gets its
/// own uniform padding summand with weights only in that row.
pub fn reduce_constraints(
    spec: &MatroidSpec,
    constraints: &[ConstraintSpec],
) -> Result<ReducedInstance> {
    let n = spec.ground_size();
    for c in constraints {
        c.validate(n)?;
    }
    let original = compile(spec)?;
    let rank = original.full_rank();

    struct Pad {
        row: usize,
        weights: Vec<i64>,
        rank: usize,
    }
    let mut parts = vec![spec.clone()];
    let mut pads: Vec<Pad> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut target: Vec<i64> = Vec::new();

    for c in constraints {
        match c.kind {
            ConstraintKind::Equality => {
                rows.push(c.weights.clone());
                target.push(c.target);
            }
            ConstraintKind::LessEqual | ConstraintKind::GreaterEqual => {
                // normalize to w(B) <= beta by sign flip
                let (row, beta) = if c.kind == ConstraintKind::LessEqual {
                    (c.weights.clone(), c.target)
                } else {
                    (c.weights.iter().map(|&w| -w).collect(), -c.target)
                };
                let d = row.iter().map(|&w| w.abs()).max().unwrap_or(0);
                let reach = d * rank as i64;
                // targets above the attainable maximum are equivalent to the
                // maximum; below the minimum the zero-size pad makes the
                // equality unreachable, which is the right verdict
                let beta_eff = beta.min(reach);
                let ones = (beta_eff + reach).max(0) as usize;
                let mut pad_w = vec![0i64; ones];
                pad_w.extend(std::iter::repeat(1).take(ones));
                pads.push(Pad {
                    row: rows.len(),
                    weights: pad_w,
                    rank: ones,
                });
                rows.push(row);
                target.push(beta_eff);
            }
            ConstraintKind::Congruence { modulus } => {
                // n slack elements of weight -modulus and n of weight zero
                let mut pad_w = vec![-modulus; n];
                pad_w.extend(std::iter::repeat(0).take(n));
                pads.push(Pad {
                    row: rows.len(),
                    weights: pad_w,
                    rank: n,
                });
                rows.push(c.weights.clone());
                target.push(c.target);
            }
        }
    }

    for pad in &pads {
        let pad_n = pad.weights.len();
        for (ri, row) in rows.iter_mut().enumerate() {
            if ri == pad.row {
                row.extend(pad.weights.iter().copied());
            } else {
                row.extend(std::iter::repeat(0).take(pad_n));
            }
        }
        parts.push(MatroidSpec::Uniform {
            n: pad_n,
            r: pad.rank,
        });
    }
    let matroid_spec = if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        MatroidSpec::DirectSum { parts }
    };

    Ok(ReducedInstance {
        matroid_spec,
        weights: rows,
        target,
        element_map: (0..n).collect(),
        original_n: n,
        original_constraints: constraints.to_vec(),
    })
}

/// Single-inequality entry point.
pub fn reduce_inequality(
    spec: &MatroidSpec,
    constraint: &ConstraintSpec,
    others: &[ConstraintSpec],
) -> Result<ReducedInstance> {
    if !matches!(
        constraint.kind,
        ConstraintKind::LessEqual | ConstraintKind::GreaterEqual
    ) {
        return Err(Error::spec("reduce_inequality expects an inequality"));
    }
    let mut all = vec![constraint.clone()];
    all.extend(others.iter().cloned());
    reduce_constraints(spec, &all)
}

/// Single-congruence entry point.
pub fn reduce_congruence(
    spec: &MatroidSpec,
    constraint: &ConstraintSpec,
    others: &[ConstraintSpec],
) -> Result<ReducedInstance> {
    if !matches!(constraint.kind, ConstraintKind::Congruence { .. }) {
        return Err(Error::spec("reduce_congruence expects a congruence"));
    }
    let mut all = vec![constraint.clone()];
    all.extend(others.iter().cloned());
    reduce_constraints(spec, &all)
}

/// Group constraint over a product of cyclic groups: one congruence row per
/// factor. Labels are componentwise residues, target likewise.
pub fn reduce_group(
    moduli: &[i64],
    labels: &[Vec<i64>],
    target: &[i64],
) -> Result<Vec<ConstraintSpec>> {
    if target.len() != moduli.len() {
        return Err(Error::spec("group target arity differs from factor count"));
    }
    for (e, label) in labels.iter().enumerate() {
        if label.len() != moduli.len() {
            return Err(Error::spec(format!(
                "label of element {e} has arity {}, expected {}",
                label.len(),
                moduli.len()
            )));
        }
        for (i, (&l, &m)) in label.iter().zip(moduli).enumerate() {
            if m < 1 {
                return Err(Error::spec("group factor moduli must be at least 1"));
            }
            if l < 0 || l >= m {
                return Err(Error::spec(format!(
                    "label residue {l} of element {e} outside [0,{m}) in factor {i}"
                )));
            }
        }
    }
    Ok(moduli
        .iter()
        .enumerate()
        .map(|(i, &m)| ConstraintSpec {
            kind: ConstraintKind::Congruence { modulus: m },
            weights: labels.iter().map(|l| l[i]).collect(),
            target: target[i].rem_euclid(m),
        })
        .collect())
}

/// Output of the m-to-1 aggregation.
#[derive(Clone, Debug)]
pub struct Aggregated {
    pub w1: Vec<i64>,
    pub w2: Vec<i64>,
    pub lambda: Vec<i64>,
    pub combined: Vec<i64>,
    pub alpha: i64,
}

/// Collapse m equality rows into one. With lambda the powers of
/// (2 gamma delta + 1) and the distance row w1 = 1 - 2 round(x*), a basis
/// B satisfies combined(B) = alpha iff its distance to the rounded vertex
/// is exactly gamma and W(B) = beta.
pub fn aggregate_to_1d(
    w: &WeightMatrix,
    beta: &[i64],
    x_round: &[i64],
    gamma: i64,
) -> Result<Aggregated> {
    if gamma < 0 {
        return Err(Error::spec("gamma must be nonnegative"));
    }
    if x_round.len() != w.n() || beta.len() != w.m() {
        return Err(Error::spec("aggregation dimension mismatch"));
    }
    let overflow = || Error::capability("aggregated weights overflow 64-bit range");
    let n = w.n() as i64;
    let delta = w.delta();
    let base = 2i64
        .checked_mul(gamma)
        .and_then(|v| v.checked_mul(delta))
        .and_then(|v| v.checked_add(1))
        .ok_or_else(overflow)?;
    let mut lambda = Vec::with_capacity(w.m());
    let mut pow = 1i64;
    for i in 0..w.m() {
        lambda.push(pow);
        if i + 1 < w.m() {
            pow = pow.checked_mul(base).ok_or_else(overflow)?;
        }
    }
    let w1: Vec<i64> = x_round.iter().map(|&r| 1 - 2 * r).collect();
    let mut w2 = Vec::with_capacity(w.n());
    for e in 0..w.n() {
        let mut acc: i64 = 0;
        for (i, row) in w.rows().iter().enumerate() {
            acc = acc
                .checked_add(lambda[i].checked_mul(row[e]).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        w2.push(acc);
    }
    let combined: Vec<i64> = w1
        .iter()
        .zip(&w2)
        .map(|(&a, &b)| {
            (2 * n + 1)
                .checked_mul(b)
                .and_then(|v| v.checked_add(a))
                .ok_or_else(overflow)
        })
        .collect::<Result<_>>()?;
    let lambda_beta: i64 = {
        let mut acc = 0i64;
        for (&l, &b) in lambda.iter().zip(beta) {
            acc = acc
                .checked_add(l.checked_mul(b).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        acc
    };
    let round_norm: i64 = x_round.iter().map(|&r| r.abs()).sum();
    let alpha = (gamma - round_norm)
        .checked_add((2 * n + 1).checked_mul(lambda_beta).ok_or_else(overflow)?)
        .ok_or_else(overflow)?;
    Ok(Aggregated {
        w1,
        w2,
        lambda,
        combined,
        alpha,
    })
}

/// Exact-weight solve for linear (or graphic) matroids through aggregation
/// and the algebraic 1-D solver: guess the rounded-vertex distance gamma in
/// increasing order, aggregate, and ask the pseudopolynomial black box.
pub fn solve_linear(
    spec: &MatroidSpec,
    w: &WeightMatrix,
    beta: &[i64],
    seed: u64,
) -> Result<SolveReport> {
    let Some(rep) = LinearRep::from_spec(spec) else {
        return Err(Error::capability(
            "solve_linear requires a linear or graphic matroid with an explicit representation",
        ));
    };
    let m = compile(spec)?.fork();
    let rank = m.full_rank();
    let n = m.ground_size();
    let lp = lp_vertex(&m, w, beta, seed)?;
    let mut stats = SolveStats {
        lp_pivots: lp.pivots,
        ..Default::default()
    };
    let vertex = match lp.solution {
        LpSolution::Infeasible => {
            stats.oracle_calls = m.oracle_calls();
            return Ok(SolveReport {
                status: SolveStatus::Infeasible,
                basis: None,
                stats,
                window_radius_used: 0,
            });
        }
        LpSolution::Vertex(v) => v,
    };
    let x_round = round_point(&vertex.point);
    let rep = rep.row_basis();
    debug_assert_eq!(rep.row_count(), rank);

    // the distance to the rounded vertex never exceeds 2n; the proven
    // proximity bound caps the search earlier only for tiny parameters
    let proximity_cap = BigInt::from(2 * w.m().max(1) as i64 * w.delta().max(1))
        .pow(13 * w.m() as u32)
        * BigInt::from(2 * w.m() as i64 * w.delta());
    let gamma_max = proximity_cap
        .to_i64()
        .unwrap_or(i64::MAX)
        .clamp(0, 2 * n as i64);

    for gamma in 0..=gamma_max {
        let agg = aggregate_to_1d(w, beta, &x_round, gamma)?;
        stats.candidates_enumerated += 1;
        let found = exact_basis_1d(
            &rep,
            &agg.combined,
            agg.alpha,
            crate::rng::subseed(seed, "solve-linear-gamma", gamma as u64),
            3,
            None,
        )?;
        stats.candidates_tested += 1;
        if let Some(basis) = found {
            if basis.len() != rank || !m.is_independent(&basis) {
                return Err(Error::internal("algebraic route returned a non-basis"));
            }
            if w.weight_of(&basis) != beta {
                return Err(Error::internal(
                    "algebraic route returned a basis off target",
                ));
            }
            stats.oracle_calls = m.oracle_calls();
            return Ok(SolveReport {
                status: SolveStatus::Found,
                basis: Some(basis),
                stats,
                window_radius_used: gamma as usize,
            });
        }
    }
    stats.oracle_calls = m.oracle_calls();
    Ok(SolveReport {
        status: SolveStatus::Infeasible,
        basis: None,
        stats,
        window_radius_used: gamma_max.max(0) as usize,
    })
}

/// Minimum-cardinality feedback edge set under vector budgets: the
/// complement of a spanning forest whose weight is at least W(E) - b in
/// every row. Budgets act on nonnegative weights, so any feasible forest
/// extends to a feasible spanning forest and the complement of a basis is
/// already cardinality-minimal.
pub fn app_feedback_edge_set(
    vertex_count: usize,
    edges: &[(usize, usize)],
    budget_rows: &[Vec<i64>],
    budget: &[i64],
    seed: u64,
) -> Result<Option<(Mask, Mask)>> {
    if budget.len() != budget_rows.len() {
        return Err(Error::spec("budget arity differs from weight rows"));
    }
    for row in budget_rows {
        if row.iter().any(|&v| v < 0) {
            return Err(Error::spec("feedback edge set weights must be nonnegative"));
        }
    }
    let spec = MatroidSpec::Graphic {
        vertex_count,
        edges: edges.to_vec(),
    };
    let constraints: Vec<ConstraintSpec> = budget_rows
        .iter()
        .zip(budget)
        .map(|(row, &b)| ConstraintSpec {
            kind: ConstraintKind::GreaterEqual,
            weights: row.clone(),
            target: row.iter().sum::<i64>() - b,
        })
        .collect();
    match solve_constrained(&spec, &constraints, seed)? {
        None => Ok(None),
        Some(forest) => {
            let all = Mask::full(edges.len());
            Ok(Some((all.difference(&forest), forest)))
        }
    }
}

/// The basis minimizing the maximum symmetric difference to the given
/// bases: search the half-distance H upward with one <= H row per base.
pub fn app_closest_base(spec: &MatroidSpec, bases: &[Mask], seed: u64) -> Result<(Mask, usize)> {
    let m = compile(spec)?;
    let rank = m.full_rank();
    let n = m.ground_size();
    if bases.is_empty() {
        return Err(Error::spec("closest base needs at least one input basis"));
    }
    for (i, b) in bases.iter().enumerate() {
        if b.len() != rank || !m.is_independent(b) {
            return Err(Error::spec(format!("input {i} is not a basis")));
        }
    }
    let rows: Vec<Vec<i64>> = bases
        .iter()
        .map(|b| (0..n).map(|e| i64::from(!b.contains(e))).collect())
        .collect();
    for h in 0..=rank as i64 {
        let constraints: Vec<ConstraintSpec> = rows
            .iter()
            .map(|row| ConstraintSpec {
                kind: ConstraintKind::LessEqual,
                weights: row.clone(),
                target: h,
            })
            .collect();
        if let Some(basis) = solve_constrained(
            spec,
            &constraints,
            crate::rng::subseed(seed, "closest-base", h as u64),
        )? {
            return Ok((basis, h as usize));
        }
    }
    Err(Error::internal(
        "closest base found no solution even at the trivial bound",
    ))
}

/// Matching with group fairness: pick a maximum matchable set of right
/// vertices meeting every group quota, then recover an explicit matching.
pub fn app_fair_matching(
    left_size: usize,
    adjacency: &[Vec<usize>],
    groups: &[Vec<usize>],
    quotas: &[i64],
    seed: u64,
) -> Result<Option<(Mask, Vec<(usize, usize)>)>> {
    let n = adjacency.len();
    if groups.len() != n {
        return Err(Error::spec("group list arity differs from right side size"));
    }
    if quotas.iter().any(|&q| q < 0) {
        return Err(Error::spec("quotas must be nonnegative"));
    }
    let m_groups = quotas.len();
    for (b, gs) in groups.iter().enumerate() {
        for &g in gs {
            if g >= m_groups {
                return Err(Error::spec(format!(
                    "element {b} belongs to unknown group {g}"
                )));
            }
        }
    }
    let spec = MatroidSpec::Transversal {
        left_size,
        adjacency: adjacency.to_vec(),
    };
    let constraints: Vec<ConstraintSpec> = (0..m_groups)
        .map(|g| ConstraintSpec {
            kind: ConstraintKind::GreaterEqual,
            weights: (0..n).map(|b| i64::from(groups[b].contains(&g))).collect(),
            target: quotas[g],
        })
        .collect();
    match solve_constrained(&spec, &constraints, seed)? {
        None => Ok(None),
        Some(selected) => {
            let matching = match_selected(left_size, adjacency, &selected)?;
            Ok(Some((selected, matching)))
        }
    }
}

/// Augmenting-path matching of the selected right vertices; total by
/// construction since the selection is independent in the transversal
/// matroid.
fn match_selected(
    left_size: usize,
    adjacency: &[Vec<usize>],
    selected: &Mask,
) -> Result<Vec<(usize, usize)>> {
    fn augment(
        e: usize,
        adjacency: &[Vec<usize>],
        matched_to: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &l in &adjacency[e] {
            if !visited[l] {
                visited[l] = true;
                let free = match matched_to[l] {
                    None => true,
                    Some(prev) => augment(prev, adjacency, matched_to, visited),
                };
                if free {
                    matched_to[l] = Some(e);
                    return true;
                }
            }
        }
        false
    }
    let mut matched_to: Vec<Option<usize>> = vec![None; left_size];
    for e in selected.iter() {
        let mut visited = vec![false; left_size];
        if !augment(e, adjacency, &mut matched_to, &mut visited) {
            return Err(Error::internal(
                "selected right set is not matchable despite independence",
            ));
        }
    }
    let mut pairs: Vec<(usize, usize)> = matched_to
        .iter()
        .enumerate()
        .filter_map(|(l, e)| e.map(|e| (e, l)))
        .collect();
    pairs.sort_unstable();
    Ok(pairs)
}

/// Reduce and solve, projecting the witness back.
pub fn solve_constrained(
    spec: &MatroidSpec,
    constraints: &[ConstraintSpec],
    seed: u64,
) -> Result<Option<Mask>> {
    let reduced = reduce_constraints(spec, constraints)?;
    let m = compile(&reduced.matroid_spec)?;
    let w = reduced.weight_matrix()?;
    let report = crate::solver::solve(&m, &w, &reduced.target, None, seed)?;
    match report.basis {
        Some(b) => {
            let original = compile(spec)?;
            Ok(Some(reduced.extract_original(&b, &original)?))
        }
        None => Ok(None),
    }
}

/// Brute-force feasibility of the original constrained instance
/// (reference oracle for round-trip tests).
pub fn brute_force_constrained(
    spec: &MatroidSpec,
    constraints: &[ConstraintSpec],
) -> Result<Option<Mask>> {
    let m = compile(spec)?;
    for b in m.enumerate_bases(usize::MAX)? {
        let ok = constraints.iter().all(|c| {
            let weight: i64 = b.iter().map(|e| c.weights[e]).sum();
            c.satisfied_by(weight)
        });
        if ok {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Round the coordinates of a rational point to the nearest integers (ties
/// away from zero, matching `BigRational::round`).
pub fn round_point(x: &[BigRational]) -> Vec<i64> {
    x.iter()
        .map(|v| v.round().to_integer().to_i64().unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::brute_force_solve;

    fn le(weights: Vec<i64>, target: i64) -> ConstraintSpec {
        ConstraintSpec {
            kind: ConstraintKind::LessEqual,
            weights,
            target,
        }
    }

    fn ge(weights: Vec<i64>, target: i64) -> ConstraintSpec {
        ConstraintSpec {
            kind: ConstraintKind::GreaterEqual,
            weights,
            target,
        }
    }

    fn congruence(weights: Vec<i64>, modulus: i64, target: i64) -> ConstraintSpec {
        ConstraintSpec {
            kind: ConstraintKind::Congruence { modulus },
            weights,
            target,
        }
    }

    #[test]
    fn inequality_reduction_keeps_both_bases() {
        // uniform(2,1), w = [0,1], require w(B) <= 1: both bases extend
        let spec = MatroidSpec::Uniform { n: 2, r: 1 };
        let red = reduce_inequality(&spec, &le(vec![0, 1], 1), &[]).unwrap();
        let m = compile(&red.matroid_spec).unwrap();
        let w = red.weight_matrix().unwrap();
        for forced in 0..2usize {
            let found = m
                .enumerate_bases(usize::MAX)
                .unwrap()
                .into_iter()
                .any(|b| b.contains(forced) && w.weight_of(&b) == red.target);
            assert!(found, "element {forced} does not extend");
        }
    }

    #[test]
    fn inequality_reduction_negative_target_infeasible() {
        let spec = MatroidSpec::Uniform { n: 2, r: 1 };
        let red = reduce_inequality(&spec, &le(vec![0, 1], -1), &[]).unwrap();
        let m = compile(&red.matroid_spec).unwrap();
        let w = red.weight_matrix().unwrap();
        let report = brute_force_solve(&m, &w, &red.target).unwrap();
        assert_eq!(report.status, SolveStatus::Infeasible);
    }

    #[test]
    fn greater_equal_picks_the_heavy_basis() {
        let spec = MatroidSpec::Uniform { n: 2, r: 1 };
        let basis = solve_constrained(&spec, &[ge(vec![0, 1], 1)], 3)
            .unwrap()
            .unwrap();
        assert_eq!(basis.elements(), vec![1]);
    }

    #[test]
    fn congruence_reduction_examples() {
        let spec = MatroidSpec::Uniform { n: 2, r: 1 };
        // w = [1, 2], p = 3, target 2: only basis {1} works
        let basis = solve_constrained(&spec, &[congruence(vec![1, 2], 3, 2)], 1)
            .unwrap()
            .unwrap();
        assert_eq!(basis.elements(), vec![1]);
        // p = 1: every basis extends
        assert!(solve_constrained(&spec, &[congruence(vec![0, 0], 1, 0)], 1)
            .unwrap()
            .is_some());
        // both bases weigh 1, target 0 mod 3: infeasible
        assert!(solve_constrained(&spec, &[congruence(vec![1, 1], 3, 0)], 1)
            .unwrap()
            .is_none());
    }

    #[test]
    fn group_reduction_transcription() {
        let constraints = reduce_group(&[2, 3], &[vec![1, 2], vec![0, 1]], &[1, 0]).unwrap();
        assert_eq!(constraints.len(), 2);
        assert_eq!(constraints[0], congruence(vec![1, 0], 2, 1));
        assert_eq!(constraints[1], congruence(vec![2, 1], 3, 0));
    }

    #[test]
    fn group_label_out_of_range_rejected() {
        assert!(reduce_group(&[2], &[vec![2]], &[0]).is_err());
    }

    #[test]
    fn aggregation_lambda_example() {
        // m = 2, delta = 1, gamma = 2: lambda = (1, 5)
        let w = WeightMatrix::new(vec![vec![1, 0], vec![0, -1]], 2).unwrap();
        let agg = aggregate_to_1d(&w, &[0, 0], &[0, 0], 2).unwrap();
        assert_eq!(agg.lambda, vec![1, 5]);
    }

    #[test]
    fn aggregation_identity_exhaustive_small() {
        // combined(B) = alpha <=> (distance = gamma and W(B) = beta)
        use rand::Rng;
        let mut rng = crate::rng::stream(21, "agg-test");
        for _ in 0..20 {
            let n = rng.random_range(2..=6usize);
            let r = rng.random_range(1..=n);
            let spec = MatroidSpec::Uniform { n, r };
            let m = compile(&spec).unwrap();
            let rows: Vec<Vec<i64>> = (0..2)
                .map(|_| (0..n).map(|_| rng.random_range(-1..=1i64)).collect())
                .collect();
            let w = WeightMatrix::new(rows, n).unwrap();
            let x_round: Vec<i64> = (0..n).map(|_| rng.random_range(0..=1i64)).collect();
            let beta: Vec<i64> = (0..2).map(|_| rng.random_range(-2..=2i64)).collect();
            for gamma in 0..=(2 * n as i64) {
                let agg = aggregate_to_1d(&w, &beta, &x_round, gamma).unwrap();
                for b in m.enumerate_bases(usize::MAX).unwrap() {
                    let combined: i64 = b.iter().map(|e| agg.combined[e]).sum();
                    let dist: i64 = (0..n)
                        .map(|e| (i64::from(b.contains(e)) - x_round[e]).abs())
                        .sum();
                    let lhs = combined == agg.alpha;
                    let rhs = dist == gamma && w.weight_of(&b) == beta;
                    assert_eq!(lhs, rhs, "n={n} gamma={gamma} basis={b:?}");
                }
            }
        }
    }

    #[test]
    fn solve_linear_triangle_examples() {
        let spec = MatroidSpec::Graphic {
            vertex_count: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        };
        let w = WeightMatrix::new(vec![vec![0, 1, 1]], 3).unwrap();
        let r1 = solve_linear(&spec, &w, &[1], 5).unwrap();
        assert_eq!(r1.status, SolveStatus::Found);
        let b = r1.basis.unwrap();
        assert!(b.elements() == vec![0, 1] || b.elements() == vec![0, 2]);

        let r2 = solve_linear(&spec, &w, &[2], 5).unwrap();
        assert_eq!(r2.status, SolveStatus::Found);
        assert_eq!(r2.basis.unwrap().elements(), vec![1, 2]);

        let r4 = solve_linear(&spec, &w, &[4], 5).unwrap();
        assert_eq!(r4.status, SolveStatus::Infeasible);
    }

    #[test]
    fn feedback_edge_set_triangle() {
        let edges = vec![(0, 1), (1, 2), (0, 2)];
        let (x, forest) = app_feedback_edge_set(3, &edges, &[vec![1, 1, 1]], &[1], 2)
            .unwrap()
            .unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(forest.len(), 2);
        assert!(app_feedback_edge_set(3, &edges, &[vec![1, 1, 1]], &[0], 2)
            .unwrap()
            .is_none());
        // acyclic graph: empty feedback set
        let path = vec![(0, 1), (1, 2)];
        let (x, _) = app_feedback_edge_set(3, &path, &[vec![1, 1]], &[0], 2)
            .unwrap()
            .unwrap();
        assert!(x.is_empty());
    }

    #[test]
    fn closest_base_examples() {
        let spec = MatroidSpec::Uniform { n: 4, r: 2 };
        let b1 = Mask::from_elements(4, [0, 1]);
        let b2 = Mask::from_elements(4, [2, 3]);
        let (_, h) = app_closest_base(&spec, &[b1.clone()], 7).unwrap();
        assert_eq!(h, 0);
        let (b, h) = app_closest_base(&spec, &[b1.clone(), b2], 7).unwrap();
        assert_eq!(h, 1);
        assert_eq!(b.len(), 2);
        let (_, h) = app_closest_base(&spec, &[b1.clone(), b1.clone(), b1], 7).unwrap();
        assert_eq!(h, 0);
    }

    #[test]
    fn fair_matching_examples() {
        // single edge, one group, quota 1
        let got = app_fair_matching(1, &[vec![0]], &[vec![0]], &[1], 3)
            .unwrap()
            .unwrap();
        assert_eq!(got.1, vec![(0, 0)]);
        // quota above the right side size: infeasible
        assert!(app_fair_matching(1, &[vec![0]], &[vec![0]], &[2], 3)
            .unwrap()
            .is_none());
        // rights 0,1 each adjacent to lefts {0,1}; one group per right
        // vertex, quotas (1,1): a perfect matching is forced
        let (selected, matching) =
            app_fair_matching(2, &[vec![0, 1], vec![0, 1]], &[vec![0], vec![1]], &[1, 1], 3)
                .unwrap()
                .unwrap();
        assert_eq!(selected.len(), 2);
        assert_eq!(matching.len(), 2);
        let lefts: std::collections::BTreeSet<usize> = matching.iter().map(|&(_, l)| l).collect();
        assert_eq!(lefts.len(), 2);
    }

    #[test]
    fn roundtrip_random_constraints() {
        use rand::Rng;
        let mut rng = crate::rng::stream(31, "reduce-roundtrip");
        for trial in 0..25 {
            let n = rng.random_range(1..=4usize);
            let r = rng.random_range(0..=n);
            let spec = MatroidSpec::Uniform { n, r };
            let kind = rng.random_range(0..3);
            let c = match kind {
                0 => le(
                    (0..n).map(|_| rng.random_range(-1..=1i64)).collect(),
                    rng.random_range(-2..=2),
                ),
                1 => ge(
                    (0..n).map(|_| rng.random_range(-1..=1i64)).collect(),
                    rng.random_range(-2..=2),
                ),
                _ => {
                    let p = rng.random_range(1..=2i64);
                    congruence(
                        (0..n).map(|_| rng.random_range(0..p)).collect(),
                        p,
                        rng.random_range(0..p),
                    )
                }
            };
            let original = brute_force_constrained(&spec, &[c.clone()]).unwrap();
            let reduced = solve_constrained(&spec, &[c.clone()], trial as u64).unwrap();
            assert_eq!(original.is_some(), reduced.is_some(), "trial {trial}: {c:?}");
        }
    }
}
