//! Instance and result documents: the JSON surface shared by the CLI and
//! any external driver. Large numbers (rationals, big integers) serialize
//! as decimal strings so consumers never face numeric-range ambiguity.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lab::BoundReport;
use crate::matroid::MatroidSpec;
use crate::reduce::{ConstraintKind, ConstraintSpec, ReducedInstance};
use crate::solver::{SolveReport, SolveStats, SolveStatus};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintDoc {
    Equality { weights: Vec<i64>, target: i64 },
    LessEqual { weights: Vec<i64>, target: i64 },
    GreaterEqual { weights: Vec<i64>, target: i64 },
    Congruence { weights: Vec<i64>, target: i64, modulus: i64 },
}

impl ConstraintDoc {
    pub fn to_spec(&self) -> ConstraintSpec {
        match self {
            ConstraintDoc::Equality { weights, target } => ConstraintSpec {
                kind: ConstraintKind::Equality,
                weights: weights.clone(),
                target: *target,
            },
            ConstraintDoc::LessEqual { weights, target } => ConstraintSpec {
                kind: ConstraintKind::LessEqual,
                weights: weights.clone(),
                target: *target,
            },
            ConstraintDoc::GreaterEqual { weights, target } => ConstraintSpec {
                kind: ConstraintKind::GreaterEqual,
                weights: weights.clone(),
                target: *target,
            },
            ConstraintDoc::Congruence {
                weights,
                target,
                modulus,
            } => ConstraintSpec {
                kind: ConstraintKind::Congruence { modulus: *modulus },
                weights: weights.clone(),
                target: *target,
            },
        }
    }

    pub fn from_spec(spec: &ConstraintSpec) -> ConstraintDoc {
        match spec.kind {
            ConstraintKind::Equality => ConstraintDoc::Equality {
                weights: spec.weights.clone(),
                target: spec.target,
            },
            ConstraintKind::LessEqual => ConstraintDoc::LessEqual {
                weights: spec.weights.clone(),
                target: spec.target,
            },
            ConstraintKind::GreaterEqual => ConstraintDoc::GreaterEqual {
                weights: spec.weights.clone(),
                target: spec.target,
            },
            ConstraintKind::Congruence { modulus } => ConstraintDoc::Congruence {
                weights: spec.weights.clone(),
                target: spec.target,
                modulus,
            },
        }
    }
}

/// Group constraint payload: the group arrives pre-decomposed as a product
/// of cyclic factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub moduli: Vec<i64>,
    /// per-element residue tuples
    pub labels: Vec<Vec<i64>>,
    pub target: Vec<i64>,
}

/// Fair-matching payload: per-element group memberships and per-group
/// quotas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FairnessDoc {
    pub groups: Vec<Vec<usize>>,
    pub quotas: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub format_version: u32,
    pub matroid: MatroidSpec,
    /// second matroid for intersection runs
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matroid2: Option<MatroidSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target: Vec<i64>,
    /// when present, overrides weights/target and is compiled via the
    /// reductions
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<ConstraintDoc>>,
    /// input bases for closest-base runs
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fairness: Option<FairnessDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl InstanceDocument {
    pub fn new(matroid: MatroidSpec, weights: Vec<Vec<i64>>, target: Vec<i64>) -> Self {
        InstanceDocument {
            format_version: FORMAT_VERSION,
            matroid,
            matroid2: None,
            weights,
            target,
            constraints: None,
            bases: None,
            group: None,
            fairness: None,
            metadata: BTreeMap::new(),
        }
    }

    /// Structural validation beyond what serde enforces.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format_version {}, expected {FORMAT_VERSION}",
                self.format_version
            )));
        }
        self.matroid.validate()?;
        if let Some(m2) = &self.matroid2 {
            m2.validate()?;
            if m2.ground_size() != self.matroid.ground_size() {
                return Err(Error::Parse(format!(
                    "matroid2 covers {} elements, matroid covers {}",
                    m2.ground_size(),
                    self.matroid.ground_size()
                )));
            }
        }
        let n = self.matroid.ground_size();
        for (i, row) in self.weights.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "weights row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        if self.target.len() != self.weights.len() {
            return Err(Error::Parse(format!(
                "target has {} entries, weights has {} rows",
                self.target.len(),
                self.weights.len()
            )));
        }
        if let Some(cs) = &self.constraints {
            for (i, c) in cs.iter().enumerate() {
                c.to_spec()
                    .validate(n)
                    .map_err(|e| Error::Parse(format!("constraints[{i}]: {e}")))?;
            }
        }
        if let Some(bs) = &self.bases {
            for (i, b) in bs.iter().enumerate() {
                for &e in b {
                    if e >= n {
                        return Err(Error::Parse(format!(
                            "bases[{i}] references element {e} outside [0,{n})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parse and validate an instance document, mapping syntax errors to
/// line/column diagnostics.
pub fn parse_instance(bytes: &[u8]) -> Result<InstanceDocument> {
    let doc: InstanceDocument = serde_json::from_slice(bytes).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    doc.validate()?;
    Ok(doc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub oracle_calls: u64,
    pub lp_pivots: u64,
    pub candidates_enumerated: u64,
    pub candidates_tested: u64,
}

impl From<&SolveStats> for StatsDoc {
    fn from(s: &SolveStats) -> StatsDoc {
        StatsDoc {
            oracle_calls: s.oracle_calls,
            lp_pivots: s.lp_pivots,
            candidates_enumerated: s.candidates_enumerated,
            candidates_tested: s.candidates_tested,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutDoc {
    pub subset: Vec<usize>,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpDoc {
    pub status: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub point: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tight_cuts: Vec<CutDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objective: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReportDoc {
    pub instance: String,
    pub observed: String,
    pub proven_bound: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    pub pass: bool,
    pub vacuous: bool,
}

impl From<&BoundReport> for BoundReportDoc {
    fn from(r: &BoundReport) -> BoundReportDoc {
        BoundReportDoc {
            instance: r.instance.clone(),
            observed: rational_string(&r.observed),
            proven_bound: r.proven_bound.to_string(),
            ratio: r.ratio.as_ref().map(rational_string),
            pass: r.pass,
            vacuous: r.vacuous,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateDoc {
    pub reports: usize,
    pub passed: usize,
    pub vacuous: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ratio: Option<String>,
}

pub fn aggregate_reports(reports: &[BoundReport]) -> AggregateDoc {
    let max_ratio = reports
        .iter()
        .filter_map(|r| r.ratio.as_ref())
        .max()
        .map(rational_string);
    AggregateDoc {
        reports: reports.len(),
        passed: reports.iter().filter(|r| r.pass).count(),
        vacuous: reports.iter().filter(|r| r.vacuous).count(),
        max_ratio,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format_version: u32,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_radius_used: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp: Option<LpDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection_witness: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generating_support: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_reports: Option<Vec<BoundReportDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<AggregateDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_instance: Option<Box<InstanceDocument>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_map: Option<Vec<usize>>,
    /// op-specific scalar outputs (H for closest-base, matching pairs, ..)
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
    pub seed: u64,
    pub solver: String,
}

impl ResultDocument {
    pub fn new(status: &str, seed: u64, solver: &str) -> ResultDocument {
        ResultDocument {
            format_version: FORMAT_VERSION,
            status: status.to_string(),
            basis: None,
            stats: None,
            window_radius_used: None,
            lp: None,
            intersection_size: None,
            intersection_witness: None,
            generating_support: None,
            bound_reports: None,
            aggregate: None,
            reduced_instance: None,
            element_map: None,
            details: BTreeMap::new(),
            seed,
            solver: solver.to_string(),
        }
    }

    pub fn from_solve_report(report: &SolveReport, seed: u64, solver: &str) -> ResultDocument {
        let mut doc = ResultDocument::new(status_str(report.status), seed, solver);
        doc.basis = report.basis.as_ref().map(|b| b.elements());
        doc.stats = Some(StatsDoc::from(&report.stats));
        doc.window_radius_used = Some(report.window_radius_used);
        doc
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serialization");
        s.push('\n');
        s
    }
}

pub fn status_str(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Found => "found",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::WindowExhausted => "window_exhausted",
    }
}

pub fn rational_string(v: &BigRational) -> String {
    if v.denom() == &BigInt::from(1) {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn reduced_to_instance_doc(reduced: &ReducedInstance) -> InstanceDocument {
    let mut doc = InstanceDocument::new(
        reduced.matroid_spec.clone(),
        reduced.weights.clone(),
        reduced.target.clone(),
    );
    doc.metadata
        .insert("original_n".into(), reduced.original_n.to_string());
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_doc() -> InstanceDocument {
        InstanceDocument::new(
            MatroidSpec::Uniform { n: 3, r: 1 },
            vec![vec![0, 1, 2]],
            vec![1],
        )
    }

    #[test]
    fn parse_minimal_instance() {
        let json = r#"{
            "format_version": 1,
            "matroid": {"kind": "uniform", "n": 3, "r": 1},
            "weights": [[0, 1, 2]],
            "target": [1]
        }"#;
        let doc = parse_instance(json.as_bytes()).unwrap();
        assert_eq!(doc, minimal_doc());
    }

    #[test]
    fn roundtrip_documents() {
        let mut doc = minimal_doc();
        doc.constraints = Some(vec![ConstraintDoc::Congruence {
            weights: vec![0, 1, 1],
            target: 1,
            modulus: 2,
        }]);
        doc.metadata.insert("name".into(), "example".into());
        let bytes = serde_json::to_vec(&doc).unwrap();
        let back = parse_instance(&bytes).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn wrong_row_length_names_the_row() {
        let json = r#"{
            "format_version": 1,
            "matroid": {"kind": "uniform", "n": 3, "r": 1},
            "weights": [[0, 1]],
            "target": [1]
        }"#;
        let err = parse_instance(json.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 0"), "{err}");
    }

    #[test]
    fn unknown_kind_rejected() {
        let json = r#"{
            "format_version": 1,
            "matroid": {"kind": "cyclic", "n": 3},
            "weights": [],
            "target": []
        }"#;
        let err = parse_instance(json.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_instance(b"{ not json").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn result_document_roundtrip() {
        let mut doc = ResultDocument::new("found", 7, "fpt");
        doc.basis = Some(vec![0, 2]);
        doc.stats = Some(StatsDoc {
            oracle_calls: 10,
            lp_pivots: 3,
            candidates_enumerated: 2,
            candidates_tested: 1,
        });
        let json = doc.to_json();
        let back: ResultDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn rational_strings() {
        use num::One;
        assert_eq!(rational_string(&BigRational::one()), "1");
        assert_eq!(
            rational_string(&BigRational::new(BigInt::from(3), BigInt::from(4))),
            "3/4"
        );
    }
}
