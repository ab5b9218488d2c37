//! JSON and CSV file formats.
//!
//! Complex numbers are `[re, im]` pairs and matrices are lists of rows of
//! such pairs. Basis elements and map images appear in basis order.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analysis::MapAnalysisReport;
use crate::basis::HermitianBasis;
use crate::dynamics::{InitialAssignment, JointScenario};
use crate::error::{Error, Result};
use crate::maps::{AffineMatrixMap, LinearMatrixMap};
use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub dim: usize,
    pub elements: Vec<ComplexMatrix>,
    pub gram_residual: f64,
}

impl From<&HermitianBasis> for BasisDocument {
    fn from(basis: &HermitianBasis) -> Self {
        Self {
            dim: basis.dim(),
            elements: basis.elements().to_vec(),
            gram_residual: basis.gram_residual(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Linear,
    Affine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDocument {
    pub dim: usize,
    pub kind: MapKind,
    pub images: Vec<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyMap {
    Linear(LinearMatrixMap),
    Affine(AffineMatrixMap),
}

impl From<&LinearMatrixMap> for MapDocument {
    fn from(map: &LinearMatrixMap) -> Self {
        Self {
            dim: map.dim(),
            kind: MapKind::Linear,
            images: map.images().to_vec(),
            offset: None,
        }
    }
}

impl From<&AffineMatrixMap> for MapDocument {
    fn from(map: &AffineMatrixMap) -> Self {
        Self {
            dim: map.dim(),
            kind: MapKind::Affine,
            images: map.linear_part().images().to_vec(),
            offset: Some(map.offset().clone()),
        }
    }
}

impl MapDocument {
    pub fn into_map(self, tol: &Tolerances) -> Result<AnyMap> {
        let basis = Arc::new(HermitianBasis::new(self.dim)?);
        let linear = LinearMatrixMap::new(basis, self.images)?;
        match (self.kind, self.offset) {
            (MapKind::Linear, None) => Ok(AnyMap::Linear(linear)),
            (MapKind::Linear, Some(_)) => {
                Err(Error::scenario("offset", "linear maps carry no offset"))
            }
            (MapKind::Affine, Some(offset)) => {
                Ok(AnyMap::Affine(AffineMatrixMap::new(linear, offset, tol)?))
            }
            (MapKind::Affine, None) => Err(Error::scenario("offset", "affine maps need an offset")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGridSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

/// On-disk scenario: joint Hamiltonian, initial-state assignment and an optional time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    pub label: String,
    pub system_dim: usize,
    pub env_dim: usize,
    pub hamiltonian: ComplexMatrix,
    pub assignment: InitialAssignment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<TimeGridSpec>,
}

/// A validated [`ScenarioDocument`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub joint: JointScenario,
    pub assignment: InitialAssignment,
    pub times: Option<TimeGridSpec>,
}

impl Scenario {
    pub fn from_document(doc: ScenarioDocument, tol: &Tolerances) -> Result<Self> {
        let joint =
            JointScenario::new(doc.label, doc.system_dim, doc.env_dim, doc.hamiltonian, tol)?;
        doc.assignment.validate(&joint)?;
        if let Some(grid) = &doc.times {
            crate::analysis::time_grid(grid.start, grid.stop, grid.steps)
                .map_err(|e| Error::scenario("times", e.to_string()))?;
        }
        Ok(Self {
            joint,
            assignment: doc.assignment,
            times: doc.times,
        })
    }

    pub fn from_json(text: &str, tol: &Tolerances) -> Result<Self> {
        Self::from_document(serde_json::from_str(text)?, tol)
    }

    pub fn load(path: impl AsRef<Path>, tol: &Tolerances) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?, tol)
    }

    pub fn to_document(&self) -> ScenarioDocument {
        ScenarioDocument {
            label: self.joint.label().to_string(),
            system_dim: self.joint.system_dim(),
            env_dim: self.joint.env_dim(),
            hamiltonian: self.joint.hamiltonian().clone(),
            assignment: self.assignment.clone(),
            times: self.times,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }
}

/// Reals in CSV use 17 significant digits.
fn csv_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Columns: `t, min_choi_full, is_cp_full, min_choi_cp_part, trace_residual,
/// equivalence_residual, d_1 … d_{N²−1}`.
pub fn write_reports_csv<W: Write>(mut out: W, reports: &[MapAnalysisReport]) -> Result<()> {
    let n_d = reports.first().map_or(0, |r| r.d_parameters.len());
    let mut header = vec![
        "t".to_string(),
        "min_choi_full".into(),
        "is_cp_full".into(),
        "min_choi_cp_part".into(),
        "trace_residual".into(),
        "equivalence_residual".into(),
    ];
    header.extend((1..=n_d).map(|k| format!("d_{k}")));
    writeln!(out, "{}", header.join(","))?;
    for r in reports {
        let mut row = vec![
            csv_real(r.time),
            csv_real(r.min_choi_eigenvalue),
            r.is_cp.to_string(),
            csv_real(r.cp_part_min_choi_eigenvalue),
            csv_real(r.trace_residual),
            csv_real(r.equivalence_residual),
        ];
        row.extend(r.d_parameters.iter().map(|&d| csv_real(d)));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_reports_json<W: Write>(mut out: W, reports: &[MapAnalysisReport]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, reports)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random::{random_hermitian, seeded_rng};

    #[test]
    fn basis_document_shape() {
        let doc = BasisDocument::from(&HermitianBasis::new(2).unwrap());
        let v = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["elements"].as_array().unwrap().len(), 4);
        assert_eq!(v["elements"][2][0][1], serde_json::json!([0.0, -1.0]));
        assert_eq!(v["gram_residual"], 0.0);
    }

    #[test]
    fn map_documents() {
        let mut rng = seeded_rng(80);
        let basis = Arc::new(HermitianBasis::new(2).unwrap());
        let linear = LinearMatrixMap::new(
            basis,
            (0..4).map(|_| random_hermitian(2, &mut rng)).collect(),
        )
        .unwrap();
        let affine = AffineMatrixMap::new(
            linear.clone(),
            random_hermitian(2, &mut rng),
            &Tolerances::default(),
        )
        .unwrap();

        let json = serde_json::to_string(&MapDocument::from(&linear)).unwrap();
        assert!(json.contains("\"kind\":\"linear\""));
        assert!(!json.contains("offset"));
        let back: MapDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(
            back.into_map(&Tolerances::default()).unwrap(),
            AnyMap::Linear(linear)
        );

        let json = serde_json::to_string(&MapDocument::from(&affine)).unwrap();
        let back: MapDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(
            back.into_map(&Tolerances::default()).unwrap(),
            AnyMap::Affine(affine)
        );
    }

    #[test]
    fn map_document_kind_offset_consistency() {
        let doc = MapDocument {
            dim: 1,
            kind: MapKind::Affine,
            images: vec![ComplexMatrix::identity(1)],
            offset: None,
        };
        assert!(doc.into_map(&Tolerances::default()).is_err());
    }

    const SCENARIO: &str = r#"{
        "label": "tiny",
        "system_dim": 1,
        "env_dim": 2,
        "hamiltonian": [[[1.0, 0.0], [0.0, 0.5]], [[0.0, -0.5], [-1.0, 0.0]]],
        "assignment": {"env_means": [0.1, 0.0, 0.0], "correlations": []},
        "times": {"start": 0.0, "stop": 1.0, "steps": 3}
    }"#;

    #[test]
    fn scenario_parse_and_round_trip() {
        let tol = Tolerances::default();
        let scn = Scenario::from_json(SCENARIO, &tol).unwrap();
        assert_eq!(scn.joint.env_dim(), 2);
        let again = Scenario::from_json(&scn.to_json().unwrap(), &tol).unwrap();
        assert_eq!(scn, again);
    }

    #[test]
    fn scenario_errors_name_the_problem() {
        let tol = Tolerances::default();
        let bad = SCENARIO.replace("[0.0, -0.5]", "[0.0, 0.5]");
        assert!(matches!(
            Scenario::from_json(&bad, &tol),
            Err(Error::NotHermitian { .. })
        ));

        let bad = SCENARIO.replace("\"env_means\": [0.1, 0.0, 0.0]", "\"env_means\": [0.1]");
        let msg = Scenario::from_json(&bad, &tol).unwrap_err().to_string();
        assert!(msg.contains("assignment.env_means"), "{msg}");

        let bad = SCENARIO.replace("\"steps\": 3", "\"steps\": 0");
        let msg = Scenario::from_json(&bad, &tol).unwrap_err().to_string();
        assert!(msg.contains("times"), "{msg}");

        let bad = SCENARIO.replace("\"system_dim\": 1,", "\"system_dim\": \"one\",");
        let msg = Scenario::from_json(&bad, &tol).unwrap_err().to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn csv_layout() {
        let report = MapAnalysisReport {
            label: "x".into(),
            time: 0.1,
            min_choi_eigenvalue: -0.25,
            is_cp: false,
            cp_part_min_choi_eigenvalue: 0.0,
            cp_part_is_cp: true,
            cp_part_unitality_residual: 0.0,
            trace_residual: 0.0,
            hermiticity_residual: 0.0,
            min_output_eigenvalue_over_samples: 0.0,
            equivalence_residual: 1e-16,
            offset_norm: 0.0,
            d_parameters: vec![0.5, 0.0, -0.5],
        };
        let mut buf = Vec::new();
        write_reports_csv(&mut buf, &[report]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,min_choi_full,is_cp_full,min_choi_cp_part,trace_residual,equivalence_residual,d_1,d_2,d_3"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "1.0000000000000001e-1");
        assert_eq!(row[2], "false");
        assert_eq!(row.len(), 9);
        assert_eq!(row[0].parse::<f64>().unwrap(), 0.1);
    }
}
