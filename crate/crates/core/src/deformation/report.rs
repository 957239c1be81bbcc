use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::reeb::MorseClassification;

use super::{instantiate_and_verify, CheckResult, DeformationError, DiagramShape, LeafSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub trunc: u32,
    /// `None` for a symbolic (expression-only) report.
    pub leaves: Option<LeafSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowReport {
    pub source: String,
    pub target: String,
    pub rule: String,
}

/// Machine-readable summary of one run. Field order is the key order of
/// the JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub classification: MorseClassification,
    pub parameters: Parameters,
    pub nodes: BTreeMap<String, String>,
    pub arrows: BTreeMap<String, ArrowReport>,
    pub garside: Option<String>,
    pub verification: Option<BTreeMap<String, CheckResult>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self, DeformationError> {
        serde_json::from_str(src).map_err(|e| DeformationError::InvalidArgument(format!("report: {e}")))
    }

    /// True unless a verification ran and some check failed.
    pub fn passed(&self) -> bool {
        self.verification
            .as_ref()
            .is_none_or(|v| v.values().all(CheckResult::passed))
    }

    /// Rebuilds the report from its own classification, parameters and notes.
    pub fn rebuild(&self) -> Result<Report, DeformationError> {
        build_report(&self.classification, self.parameters.clone(), self.notes.clone())
    }
}

/// Builds the diagram for `classification` with symbolic leaves for the
/// node and arrow listing, and verifies it when `parameters.leaves` is set.
pub fn build_report(
    classification: &MorseClassification,
    parameters: Parameters,
    notes: Vec<String>,
) -> Result<Report, DeformationError> {
    let shape = DiagramShape::from_classification(classification);
    let diagram = shape.build(None)?;
    let nodes = diagram.nodes.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    let arrows = diagram
        .arrows
        .iter()
        .map(|a| {
            (
                a.name.clone(),
                ArrowReport {
                    source: a.source.clone(),
                    target: a.target.clone(),
                    rule: a.hom.rule.to_string(),
                },
            )
        })
        .collect();
    let verification = match &parameters.leaves {
        Some(spec) => Some(instantiate_and_verify(&diagram, &spec.assignments()?, parameters.trunc)?.checks),
        None => None,
    };
    Ok(Report {
        classification: classification.clone(),
        garside: diagram.garside.as_ref().map(ToString::to_string),
        parameters,
        nodes,
        arrows,
        verification,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(n: u64, m: u64, r: usize) -> MorseClassification {
        MorseClassification::F0 {
            special_vertex: 0,
            n,
            m,
            r,
            disk_orbits: vec![],
        }
    }

    #[test]
    fn symbolic_report_has_no_verification() {
        let params = Parameters { trunc: 4, leaves: None };
        let r = build_report(&tree(1, 2, 2), params, vec![]).unwrap();
        assert!(r.verification.is_none());
        assert!(r.passed());
        assert_eq!(r.nodes["S"], "wrCP(Atom(S:D1)*Atom(S:D2);1,2)");
        assert_eq!(r.arrows["d1"].rule, "mod_reduce");
    }

    #[test]
    fn report_round_trips() {
        let params = Parameters {
            trunc: 4,
            leaves: Some(LeafSpec::default()),
        };
        let r = build_report(&tree(1, 1, 1), params, vec!["a note".into()]).unwrap();
        assert!(r.passed());
        let json = r.to_json();
        let back = Report::from_json(&json).unwrap();
        assert_eq!(back.rebuild().unwrap().to_json(), json);
    }
}
