//! Command-line surface. All output goes to the writer as one JSON result
//! document (human-oriented notes go to stderr); exit codes are
//! 0 = found/pass, 2 = infeasible or exhausted, 1 = usage or input error,
//! 3 = internal alarm.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;

use crate::error::Error;
use crate::io::{
    aggregate_reports, parse_instance, reduced_to_instance_doc, BoundReportDoc, CutDoc,
    FairnessDoc, GroupDoc, InstanceDocument, LpDoc, ResultDocument,
};
use crate::lab::{self, BoundReport, LowerBoundKind};
use crate::lp::{LpSolution, RankCut};
use crate::mask::Mask;
use crate::matroid::{compile, MatroidSpec};
use crate::reduce;
use crate::solver::{self, SolveStatus};
use crate::weights::WeightMatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_ALARM: i32 = 3;

#[derive(Parser)]
#[command(
    name = "exactbasis",
    about = "Exact-weight matroid basis toolkit",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArg {
    /// Path to a JSON instance document
    #[arg(long)]
    instance: String,
    /// Master seed; every random choice derives from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Find a basis of exact prescribed weight
    Solve {
        #[command(flatten)]
        common: InstanceArg,
        /// Worker threads for candidate testing (output is identical for
        /// any value)
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Override the proximity window radius
        #[arg(long)]
        radius: Option<usize>,
        /// Use the basis-enumeration reference oracle instead
        #[arg(long)]
        brute_force: bool,
        /// Route through the aggregation + algebraic pipeline (linear and
        /// graphic matroids only)
        #[arg(long)]
        linear: bool,
    },
    /// Compute a vertex of the base polytope cut by the weight equalities
    LpVertex {
        #[command(flatten)]
        common: InstanceArg,
    },
    /// Maximum common independent set of the instance's two matroids
    Intersect {
        #[command(flatten)]
        common: InstanceArg,
        /// Also compute the min-max witness set (small ground sets only)
        #[arg(long)]
        certify: bool,
    },
    /// Randomized exact-weight solve on an explicit linear representation
    AlgebraicSolve {
        #[command(flatten)]
        common: InstanceArg,
        /// Target weight (defaults to the instance's first target entry)
        #[arg(long)]
        beta: Option<i64>,
        #[arg(long, default_value_t = 3)]
        retries: u32,
        /// Working prime for rational representations
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Rewrite a constrained instance into an equality-only instance
    Reduce {
        #[command(flatten)]
        common: InstanceArg,
    },
    /// Bound experiments
    #[command(subcommand)]
    Lab(LabCommand),
    /// Application solvers built on the reductions
    #[command(subcommand)]
    App(AppCommand),
    /// Run the embedded acceptance suite
    Selftest {
        /// Reduced instance counts for a fast sanity pass
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum LabCommand {
    /// Sensitivity bound checks over the catalog
    Sensitivity {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Basis pairs sampled per catalog entry
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
    /// Proximity bound checks over the catalog
    Proximity {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Targets sampled per catalog entry
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 14)]
        max_n: usize,
    },
    /// Generate and verify a matroid-intersection boundary instance
    Lowerbound {
        #[arg(long, value_enum)]
        kind: LowerBoundArg,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LowerBoundArg {
    Sensitivity,
    Proximity,
}

#[derive(Subcommand)]
enum AppCommand {
    /// Minimum feedback edge set under budget vectors
    FeedbackEdgeSet {
        #[command(flatten)]
        common: InstanceArg,
    },
    /// Basis minimizing the maximum symmetric difference to given bases
    ClosestBase {
        #[command(flatten)]
        common: InstanceArg,
    },
    /// Maximum matching meeting group quotas
    FairMatching {
        #[command(flatten)]
        common: InstanceArg,
    },
    /// Basis whose group labels multiply to a target element
    GroupBase {
        #[command(flatten)]
        common: InstanceArg,
    },
}

/// Entry point: parse argv, run, write one result document.
pub fn run<I, S>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok((doc, code)) => {
            let _ = out.write_all(doc.to_json().as_bytes());
            code
        }
        Err(e) => {
            let mut doc = ResultDocument::new("error", 0, "none");
            doc.details.insert("error".into(), e.to_string());
            let _ = out.write_all(doc.to_json().as_bytes());
            match e {
                Error::Internal(_) => EXIT_ALARM,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn read_instance(path: &str) -> crate::error::Result<InstanceDocument> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    parse_instance(&bytes)
}

/// Instances whose constraint list is present get reduced first; the
/// returned weights/targets are the effective equality system.
struct Prepared {
    doc: InstanceDocument,
    spec: MatroidSpec,
    weights: WeightMatrix,
    target: Vec<i64>,
    reduced: Option<reduce::ReducedInstance>,
}

fn prepare(doc: InstanceDocument) -> crate::error::Result<Prepared> {
    match &doc.constraints {
        Some(cs) => {
            let constraints: Vec<_> = cs.iter().map(|c| c.to_spec()).collect();
            let reduced = reduce::reduce_constraints(&doc.matroid, &constraints)?;
            let weights = reduced.weight_matrix()?;
            Ok(Prepared {
                spec: reduced.matroid_spec.clone(),
                weights,
                target: reduced.target.clone(),
                reduced: Some(reduced),
                doc,
            })
        }
        None => {
            let weights =
                WeightMatrix::new(doc.weights.clone(), doc.matroid.ground_size())?;
            Ok(Prepared {
                spec: doc.matroid.clone(),
                weights,
                target: doc.target.clone(),
                reduced: None,
                doc,
            })
        }
    }
}

type Outcome = crate::error::Result<(ResultDocument, i32)>;

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Solve {
            common,
            jobs,
            radius,
            brute_force,
            linear,
        } => cmd_solve(common, jobs, radius, brute_force, linear),
        Command::LpVertex { common } => cmd_lp_vertex(common),
        Command::Intersect { common, certify } => cmd_intersect(common, certify),
        Command::AlgebraicSolve {
            common,
            beta,
            retries,
            prime,
        } => cmd_algebraic(common, beta, retries, prime),
        Command::Reduce { common } => cmd_reduce(common),
        Command::Lab(lab_cmd) => cmd_lab(lab_cmd),
        Command::App(app_cmd) => cmd_app(app_cmd),
        Command::Selftest { quick } => cmd_selftest(quick),
    }
}

fn solve_exit(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Found => EXIT_OK,
        _ => EXIT_INFEASIBLE,
    }
}

/// Re-verify a witness against a freshly compiled oracle before emitting.
fn verify_out(
    spec: &MatroidSpec,
    weights: &WeightMatrix,
    target: &[i64],
    basis: &Mask,
) -> crate::error::Result<()> {
    let fresh = compile(spec)?;
    if basis.len() != fresh.full_rank()
        || !fresh.is_independent(basis)
        || weights.weight_of(basis) != target
    {
        return Err(Error::internal(
            "emitted basis failed re-verification against a fresh oracle",
        ));
    }
    Ok(())
}

fn cmd_solve(
    common: InstanceArg,
    jobs: usize,
    radius: Option<usize>,
    brute_force: bool,
    linear: bool,
) -> Outcome {
    if jobs == 0 {
        return Err(Error::spec("--jobs must be at least 1"));
    }
    let prepared = prepare(read_instance(&common.instance)?)?;
    let m = compile(&prepared.spec)?;
    let (report, solver_name) = if brute_force {
        (
            solver::brute_force_solve(&m, &prepared.weights, &prepared.target)?,
            "brute_force",
        )
    } else if linear {
        (
            reduce::solve_linear(&prepared.spec, &prepared.weights, &prepared.target, common.seed)?,
            "linear_algebraic",
        )
    } else {
        (
            solver::solve_sharded(
                &m,
                &prepared.weights,
                &prepared.target,
                radius,
                common.seed,
                jobs,
            )?,
            "fpt",
        )
    };
    let mut doc = ResultDocument::from_solve_report(&report, common.seed, solver_name);
    if let Some(basis) = &report.basis {
        verify_out(&prepared.spec, &prepared.weights, &prepared.target, basis)?;
        // report in original numbering when the instance was reduced
        if let Some(reduced) = &prepared.reduced {
            let original = compile(&prepared.doc.matroid)?;
            let original_basis = reduced.extract_original(basis, &original)?;
            doc.basis = Some(original_basis.elements());
            doc.details
                .insert("reduced_basis".into(), format!("{:?}", basis.elements()));
        }
    }
    Ok((doc, solve_exit(report.status)))
}

fn cmd_lp_vertex(common: InstanceArg) -> Outcome {
    let prepared = prepare(read_instance(&common.instance)?)?;
    let m = compile(&prepared.spec)?;
    let lp = crate::lp::lp_vertex(&m, &prepared.weights, &prepared.target, common.seed)?;
    let mut doc = ResultDocument::new(
        match &lp.solution {
            LpSolution::Vertex(_) => "found",
            LpSolution::Infeasible => "infeasible",
        },
        common.seed,
        "fpt",
    );
    match lp.solution {
        LpSolution::Vertex(v) => {
            let face_dim = if m.ground_size() <= 20 {
                crate::lp::minimal_face_dimension(&m, &v.point).ok()
            } else {
                None
            };
            doc.lp = Some(LpDoc {
                status: "vertex".into(),
                point: v.point.iter().map(crate::io::rational_string).collect(),
                tight_cuts: v
                    .tight_cuts
                    .iter()
                    .map(|c: &RankCut| CutDoc {
                        subset: c.subset.elements(),
                        rhs: c.rhs,
                    })
                    .collect(),
                face_dim,
                objective: v.objective.iter().map(crate::io::rational_string).collect(),
            });
            Ok((doc, EXIT_OK))
        }
        LpSolution::Infeasible => {
            doc.lp = Some(LpDoc {
                status: "infeasible".into(),
                point: vec![],
                tight_cuts: vec![],
                face_dim: None,
                objective: vec![],
            });
            Ok((doc, EXIT_INFEASIBLE))
        }
    }
}

fn cmd_intersect(common: InstanceArg, certify: bool) -> Outcome {
    let doc = read_instance(&common.instance)?;
    let Some(m2_spec) = &doc.matroid2 else {
        return Err(Error::spec("intersect needs a matroid2 in the instance"));
    };
    let m1 = compile(&doc.matroid)?;
    let m2 = compile(m2_spec)?;
    let cert = crate::intersect::max_common_independent(&m1, &m2, certify)?;
    let mut out = ResultDocument::new("found", common.seed, "fpt");
    out.basis = Some(cert.common_set.elements());
    out.intersection_size = Some(cert.common_set.len());
    out.intersection_witness = cert.partition_witness.map(|w| w.elements());
    Ok((out, EXIT_OK))
}

fn cmd_algebraic(
    common: InstanceArg,
    beta: Option<i64>,
    retries: u32,
    prime: Option<u64>,
) -> Outcome {
    let doc = read_instance(&common.instance)?;
    let Some(rep) = crate::algebraic::LinearRep::from_spec(&doc.matroid) else {
        return Err(Error::capability(
            "algebraic-solve needs a linear or graphic matroid",
        ));
    };
    if doc.weights.len() != 1 {
        return Err(Error::spec(
            "algebraic-solve expects exactly one weight row",
        ));
    }
    let w = &doc.weights[0];
    let beta = match beta {
        Some(b) => b,
        None => *doc
            .target
            .first()
            .ok_or_else(|| Error::spec("no --beta and no target in the instance"))?,
    };
    let rep = rep.row_basis();
    let poly = crate::algebraic::generating_poly(&rep, w, common.seed, prime)?;
    let found = crate::algebraic::exact_basis_1d(&rep, w, beta, common.seed, retries, prime)?;
    let mut out = ResultDocument::new(
        if found.is_some() { "found" } else { "infeasible" },
        common.seed,
        "linear_algebraic",
    );
    out.generating_support = Some(poly.support_weights());
    let code = match found {
        Some(basis) => {
            let fresh = compile(&doc.matroid)?;
            if !fresh.is_independent(&basis)
                || basis.iter().map(|e| w[e]).sum::<i64>() != beta
            {
                return Err(Error::internal("algebraic witness failed re-verification"));
            }
            out.basis = Some(basis.elements());
            EXIT_OK
        }
        None => EXIT_INFEASIBLE,
    };
    Ok((out, code))
}

fn cmd_reduce(common: InstanceArg) -> Outcome {
    let doc = read_instance(&common.instance)?;
    let Some(cs) = &doc.constraints else {
        return Err(Error::spec("reduce needs a constraints list"));
    };
    let constraints: Vec<_> = cs.iter().map(|c| c.to_spec()).collect();
    let reduced = reduce::reduce_constraints(&doc.matroid, &constraints)?;
    let mut out = ResultDocument::new("found", common.seed, "none");
    out.element_map = Some(reduced.element_map.clone());
    out.reduced_instance = Some(Box::new(reduced_to_instance_doc(&reduced)));
    Ok((out, EXIT_OK))
}

fn reports_outcome(reports: Vec<BoundReport>, seed: u64) -> Outcome {
    let all_pass = reports.iter().all(|r| r.pass);
    let mut out = ResultDocument::new(if all_pass { "pass" } else { "fail" }, seed, "none");
    out.aggregate = Some(aggregate_reports(&reports));
    out.bound_reports = Some(reports.iter().map(BoundReportDoc::from).collect());
    Ok((out, if all_pass { EXIT_OK } else { EXIT_ALARM }))
}

fn cmd_lab(cmd: LabCommand) -> Outcome {
    match cmd {
        LabCommand::Sensitivity { seed, count, max_n } => {
            let reports = lab_sensitivity_batch(seed, count, max_n)?;
            reports_outcome(reports, seed)
        }
        LabCommand::Proximity { seed, count, max_n } => {
            let reports = lab_proximity_batch(seed, count, max_n)?;
            reports_outcome(reports, seed)
        }
        LabCommand::Lowerbound { kind, n } => {
            let kind = match kind {
                LowerBoundArg::Sensitivity => LowerBoundKind::Sensitivity,
                LowerBoundArg::Proximity => LowerBoundKind::Proximity,
            };
            let instance = lab::lower_bound_instance(kind, n)?;
            let report = instance.verify()?;
            reports_outcome(vec![report], 0)
        }
    }
}

/// Sensitivity experiment: random weight matrices and basis pairs over the
/// catalog, checked against the proven bound.
pub fn lab_sensitivity_batch(
    seed: u64,
    count: usize,
    max_n: usize,
) -> crate::error::Result<Vec<BoundReport>> {
    use rand::Rng;
    let mut reports = Vec::new();
    for (id, spec) in lab::catalog(max_n.min(12)) {
        let m = compile(&spec)?;
        let n = m.ground_size();
        let bases = m.enumerate_bases(usize::MAX)?;
        if bases.len() < 2 {
            continue;
        }
        let mut rng = crate::rng::stream(seed, &format!("lab-sensitivity-{id}"));
        for trial in 0..count {
            let rows = rng.random_range(1..=2usize);
            let delta = rng.random_range(1..=2i64);
            let w = WeightMatrix::new(
                (0..rows)
                    .map(|_| (0..n).map(|_| rng.random_range(-delta..=delta)).collect())
                    .collect(),
                n,
            )?;
            let a = &bases[rng.random_range(0..bases.len())];
            let b = &bases[rng.random_range(0..bases.len())];
            reports.push(lab::min_symdiff_exact(
                &m,
                &w,
                a,
                b,
                format!("{id}-pair{trial}"),
            )?);
        }
    }
    Ok(reports)
}

/// Proximity experiment: single-row unit-delta weights over the catalog,
/// feasible targets, distance of the LP vertex to the nearest exact basis.
pub fn lab_proximity_batch(
    seed: u64,
    count: usize,
    max_n: usize,
) -> crate::error::Result<Vec<BoundReport>> {
    use rand::Rng;
    let mut reports = Vec::new();
    for (id, spec) in lab::catalog(max_n.min(14)) {
        let m = compile(&spec)?;
        let n = m.ground_size();
        let bases = m.enumerate_bases(usize::MAX)?;
        if bases.is_empty() {
            continue;
        }
        let mut rng = crate::rng::stream(seed, &format!("lab-proximity-{id}"));
        for trial in 0..count {
            let w = WeightMatrix::new(
                vec![(0..n).map(|_| rng.random_range(-1..=1i64)).collect()],
                n,
            )?;
            // force feasibility by aiming at a random basis's weight
            let target = w.weight_of(&bases[rng.random_range(0..bases.len())]);
            reports.push(lab::proximity_exact(
                &m,
                &w,
                &target,
                crate::rng::subseed(seed, &id, trial as u64),
                format!("{id}-target{trial}"),
            )?);
        }
    }
    Ok(reports)
}

fn cmd_app(cmd: AppCommand) -> Outcome {
    match cmd {
        AppCommand::FeedbackEdgeSet { common } => {
            let doc = read_instance(&common.instance)?;
            let MatroidSpec::Graphic {
                vertex_count,
                edges,
            } = &doc.matroid
            else {
                return Err(Error::spec("feedback-edge-set needs a graphic matroid"));
            };
            let result = reduce::app_feedback_edge_set(
                *vertex_count,
                edges,
                &doc.weights,
                &doc.target,
                common.seed,
            )?;
            let mut out = ResultDocument::new(
                if result.is_some() { "found" } else { "infeasible" },
                common.seed,
                "fpt",
            );
            let code = match result {
                Some((feedback, forest)) => {
                    out.basis = Some(feedback.elements());
                    out.details
                        .insert("forest".into(), format!("{:?}", forest.elements()));
                    out.details
                        .insert("feedback_size".into(), feedback.len().to_string());
                    EXIT_OK
                }
                None => EXIT_INFEASIBLE,
            };
            Ok((out, code))
        }
        AppCommand::ClosestBase { common } => {
            let doc = read_instance(&common.instance)?;
            let Some(bases) = &doc.bases else {
                return Err(Error::spec("closest-base needs a bases list"));
            };
            let n = doc.matroid.ground_size();
            let masks: Vec<Mask> = bases
                .iter()
                .map(|b| Mask::from_elements(n, b.iter().copied()))
                .collect();
            let (basis, h) = reduce::app_closest_base(&doc.matroid, &masks, common.seed)?;
            let mut out = ResultDocument::new("found", common.seed, "fpt");
            out.basis = Some(basis.elements());
            out.details.insert("max_half_distance".into(), h.to_string());
            out.details.insert(
                "max_symmetric_difference".into(),
                (2 * h).to_string(),
            );
            Ok((out, EXIT_OK))
        }
        AppCommand::FairMatching { common } => {
            let doc = read_instance(&common.instance)?;
            let MatroidSpec::Transversal {
                left_size,
                adjacency,
            } = &doc.matroid
            else {
                return Err(Error::spec("fair-matching needs a transversal matroid"));
            };
            let Some(FairnessDoc { groups, quotas }) = &doc.fairness else {
                return Err(Error::spec("fair-matching needs a fairness block"));
            };
            let result = reduce::app_fair_matching(
                *left_size,
                adjacency,
                groups,
                quotas,
                common.seed,
            )?;
            let mut out = ResultDocument::new(
                if result.is_some() { "found" } else { "infeasible" },
                common.seed,
                "fpt",
            );
            let code = match result {
                Some((selected, matching)) => {
                    out.basis = Some(selected.elements());
                    out.details
                        .insert("matching".into(), format!("{matching:?}"));
                    EXIT_OK
                }
                None => EXIT_INFEASIBLE,
            };
            Ok((out, code))
        }
        AppCommand::GroupBase { common } => {
            let doc = read_instance(&common.instance)?;
            let Some(GroupDoc {
                moduli,
                labels,
                target,
            }) = &doc.group
            else {
                return Err(Error::spec("group-base needs a group block"));
            };
            if labels.len() != doc.matroid.ground_size() {
                return Err(Error::spec("one label tuple per element is required"));
            }
            let constraints = reduce::reduce_group(moduli, labels, target)?;
            let found = reduce::solve_constrained(&doc.matroid, &constraints, common.seed)?;
            let mut out = ResultDocument::new(
                if found.is_some() { "found" } else { "infeasible" },
                common.seed,
                "fpt",
            );
            let code = match found {
                Some(basis) => {
                    out.basis = Some(basis.elements());
                    EXIT_OK
                }
                None => EXIT_INFEASIBLE,
            };
            Ok((out, code))
        }
    }
}

fn cmd_selftest(quick: bool) -> Outcome {
    let scale = if quick {
        crate::selftest::Scale::Quick
    } else {
        crate::selftest::Scale::Full
    };
    let results = crate::selftest::run_all(scale);
    let all_pass = results.iter().all(|r| r.pass);
    let mut out = ResultDocument::new(if all_pass { "pass" } else { "fail" }, 0, "none");
    for r in &results {
        eprintln!("{}", r.line());
        out.details.insert(r.name.clone(), r.summary());
    }
    Ok((out, if all_pass { EXIT_OK } else { EXIT_ALARM }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_instance(doc: &InstanceDocument) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(f.path(), serde_json::to_vec_pretty(doc).unwrap()).unwrap();
        f
    }

    fn run_cli(args: &[&str]) -> (i32, ResultDocument) {
        let mut buf = Vec::new();
        let argv = std::iter::once("exactbasis").chain(args.iter().copied());
        let code = run(argv, &mut buf);
        let doc = serde_json::from_slice(&buf)
            .unwrap_or_else(|e| panic!("bad output: {e}\n{}", String::from_utf8_lossy(&buf)));
        (code, doc)
    }

    fn c4_instance() -> InstanceDocument {
        InstanceDocument::new(
            MatroidSpec::Graphic {
                vertex_count: 4,
                edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            },
            vec![vec![1, 0, 0, 0]],
            vec![0],
        )
    }

    #[test]
    fn solve_found_and_exit_codes() {
        let f = write_instance(&c4_instance());
        let path = f.path().to_str().unwrap();
        let (code, doc) = run_cli(&["solve", "--instance", path, "--seed", "7"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(doc.status, "found");
        assert_eq!(doc.basis, Some(vec![1, 2, 3]));

        let mut infeasible = c4_instance();
        infeasible.target = vec![9];
        let f2 = write_instance(&infeasible);
        let (code, doc) = run_cli(&["solve", "--instance", f2.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_INFEASIBLE);
        assert_eq!(doc.status, "infeasible");
    }

    #[test]
    fn brute_force_flag_agrees() {
        let f = write_instance(&c4_instance());
        let path = f.path().to_str().unwrap();
        let (_, fpt) = run_cli(&["solve", "--instance", path]);
        let (_, brute) = run_cli(&["solve", "--instance", path, "--brute-force"]);
        assert_eq!(fpt.status, brute.status);
        assert_eq!(fpt.basis, brute.basis);
    }

    #[test]
    fn determinism_across_jobs() {
        let f = write_instance(&c4_instance());
        let path = f.path().to_str().unwrap();
        let mut outs = Vec::new();
        for jobs in ["1", "4"] {
            let mut buf = Vec::new();
            let code = run(
                ["exactbasis", "solve", "--instance", path, "--seed", "3", "--jobs", jobs],
                &mut buf,
            );
            assert_eq!(code, EXIT_OK);
            outs.push(buf);
        }
        assert_eq!(outs[0], outs[1]);
    }

    #[test]
    fn lp_vertex_output() {
        let doc = InstanceDocument::new(
            MatroidSpec::Uniform { n: 2, r: 1 },
            vec![vec![0, 1]],
            vec![0],
        );
        let f = write_instance(&doc);
        let (code, out) = run_cli(&["lp-vertex", "--instance", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let lp = out.lp.unwrap();
        assert_eq!(lp.point, vec!["1", "0"]);
        assert_eq!(lp.face_dim, Some(0));
    }

    #[test]
    fn intersect_requires_second_matroid() {
        let f = write_instance(&c4_instance());
        let (code, out) = run_cli(&["intersect", "--instance", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(out.status, "error");
    }

    #[test]
    fn intersect_c4_partition_matroids() {
        let mut doc = InstanceDocument::new(
            MatroidSpec::Partition {
                blocks: vec![vec![0, 3], vec![1, 2]],
                capacities: vec![1, 1],
            },
            vec![],
            vec![],
        );
        doc.matroid2 = Some(MatroidSpec::Partition {
            blocks: vec![vec![0, 1], vec![2, 3]],
            capacities: vec![1, 1],
        });
        let f = write_instance(&doc);
        let (code, out) = run_cli(&[
            "intersect",
            "--instance",
            f.path().to_str().unwrap(),
            "--certify",
        ]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.intersection_size, Some(2));
        assert!(out.intersection_witness.is_some());
    }

    #[test]
    fn algebraic_solve_k4() {
        let doc = InstanceDocument::new(
            MatroidSpec::Graphic {
                vertex_count: 4,
                edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            },
            vec![vec![1; 6]],
            vec![3],
        );
        let f = write_instance(&doc);
        let (code, out) = run_cli(&["algebraic-solve", "--instance", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.generating_support, Some(vec![3]));
        assert_eq!(out.basis.map(|b| b.len()), Some(3));
    }

    #[test]
    fn reduce_emits_equality_instance() {
        let mut doc = InstanceDocument::new(MatroidSpec::Uniform { n: 2, r: 1 }, vec![], vec![]);
        doc.constraints = Some(vec![crate::io::ConstraintDoc::LessEqual {
            weights: vec![0, 1],
            target: 1,
        }]);
        let f = write_instance(&doc);
        let (code, out) = run_cli(&["reduce", "--instance", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let reduced = out.reduced_instance.unwrap();
        assert!(reduced.matroid.ground_size() > 2);
        assert_eq!(out.element_map, Some(vec![0, 1]));
    }

    #[test]
    fn constrained_instance_solves_end_to_end() {
        let mut doc = InstanceDocument::new(MatroidSpec::Uniform { n: 2, r: 1 }, vec![], vec![]);
        doc.constraints = Some(vec![crate::io::ConstraintDoc::GreaterEqual {
            weights: vec![0, 1],
            target: 1,
        }]);
        let f = write_instance(&doc);
        let (code, out) = run_cli(&["solve", "--instance", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.basis, Some(vec![1]));
    }

    #[test]
    fn lab_lowerbound_proximity() {
        let (code, out) = run_cli(&["lab", "lowerbound", "--kind", "proximity", "--n", "8"]);
        assert_eq!(code, EXIT_OK);
        let reports = out.bound_reports.unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].observed, "6");
    }

    #[test]
    fn lab_lowerbound_sensitivity_parity_error() {
        let mut buf = Vec::new();
        let code = run(
            ["exactbasis", "lab", "lowerbound", "--kind", "sensitivity", "--n", "3"],
            &mut buf,
        );
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn app_group_base_end_to_end() {
        let mut doc = InstanceDocument::new(MatroidSpec::Uniform { n: 2, r: 1 }, vec![], vec![]);
        doc.group = Some(GroupDoc {
            moduli: vec![3],
            labels: vec![vec![1], vec![2]],
            target: vec![2],
        });
        let f = write_instance(&doc);
        let (code, out) = run_cli(&["app", "group-base", "--instance", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.basis, Some(vec![1]));
    }

    #[test]
    fn missing_file_is_usage_error() {
        let mut buf = Vec::new();
        let code = run(
            ["exactbasis", "solve", "--instance", "/nonexistent.json"],
            &mut buf,
        );
        assert_eq!(code, EXIT_USAGE);
    }
}
