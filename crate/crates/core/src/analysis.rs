//! Diagnostics that turn maps into verdicts.
//!
//! The Choi matrix uses the unnormalized convention
//! `J = Σ_ij E_ij ⊗ T(E_ij)`, so the identity map has top eigenvalue `N`
//! and `Tr J = N` for trace-preserving `T`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    affine_decomposition, d_parameters, AffineDecomposition, InitialAssignment, JointScenario,
};
use crate::error::{Error, Result};
use crate::maps::{AffineMatrixMap, LinearMatrixMap};
use crate::matrix::eigen::eigendecompose_hermitian_part;
use crate::matrix::random::sample_density_matrices;
use crate::matrix::{kron, ComplexMatrix, DensityMatrix, C64};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub source_dim: usize,
}

pub fn choi_matrix(map: &LinearMatrixMap) -> Result<ChoiMatrix> {
    let n = map.dim();
    let mut j = ComplexMatrix::zeros(n * n);
    for row in 0..n {
        for col in 0..n {
            let unit = ComplexMatrix::unit(n, row, col);
            let image = map.apply(&unit)?;
            j += &kron(&unit, &image);
        }
    }
    Ok(ChoiMatrix {
        matrix: j,
        source_dim: n,
    })
}

impl ChoiMatrix {
    /// Ascending eigenvalues; fails if `J` is not Hermitian within `tol.herm`.
    pub fn eigenvalues(&self, tol: &Tolerances) -> Result<Vec<f64>> {
        let residual = self.matrix.hermiticity_residual();
        if residual > tol.herm {
            return Err(Error::NonHermitianChoi {
                residual,
                tolerance: tol.herm,
            });
        }
        Ok(eigendecompose_hermitian_part(&self.matrix)?.eigenvalues)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpVerdict {
    pub is_cp: bool,
    pub min_eigenvalue: f64,
}

/// Complete positivity via the smallest Choi eigenvalue, accepted down to `−tol.psd`.
pub fn is_completely_positive(map: &LinearMatrixMap, tol: &Tolerances) -> Result<CpVerdict> {
    let eigenvalues = choi_matrix(map)?.eigenvalues(tol)?;
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    Ok(CpVerdict {
        is_cp: min_eigenvalue >= -tol.psd,
        min_eigenvalue,
    })
}

/// `max_μ |Tr[T(F_μ)] − Tr[F_μ]|`.
pub fn check_trace_preserving(map: &LinearMatrixMap) -> f64 {
    map.basis()
        .elements()
        .iter()
        .zip(map.images())
        .map(|(f, image)| (image.trace() - f.trace()).norm())
        .fold(0.0, f64::max)
}

/// `max_μ ‖T(F_μ) − T(F_μ)†‖_F`; zero for Hermiticity-preserving maps.
pub fn hermiticity_residual(map: &LinearMatrixMap) -> f64 {
    map.images()
        .iter()
        .map(ComplexMatrix::hermiticity_residual)
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffinePhysicality {
    /// `max |Tr[M(ρ)] − 1|`.
    pub trace_residual: f64,
    /// Smallest eigenvalue of (the Hermitian part of) any `M(ρ)`.
    pub min_output_eigenvalue: f64,
}

pub fn check_affine_physicality(
    map: &AffineMatrixMap,
    samples: &[DensityMatrix],
) -> Result<AffinePhysicality> {
    let mut trace_residual: f64 = 0.0;
    let mut min_output_eigenvalue = f64::INFINITY;
    for rho in samples {
        let out = map.apply(rho.matrix())?;
        trace_residual = trace_residual.max((out.trace() - C64::new(1.0, 0.0)).norm());
        let min = eigendecompose_hermitian_part(&out)?.min_eigenvalue();
        min_output_eigenvalue = min_output_eigenvalue.min(min);
    }
    Ok(AffinePhysicality {
        trace_residual,
        min_output_eigenvalue,
    })
}

/// `max_ρ ‖M(ρ) − T(ρ)‖_F` over the samples.
pub fn equivalence_residual(
    affine: &AffineMatrixMap,
    linear: &LinearMatrixMap,
    samples: &[DensityMatrix],
) -> Result<f64> {
    if affine.dim() != linear.dim() {
        return Err(Error::DimensionMismatch {
            expected: affine.dim(),
            found: linear.dim(),
        });
    }
    samples.iter().try_fold(0.0f64, |worst, rho| {
        let a = affine.apply(rho.matrix())?;
        let b = linear.apply(rho.matrix())?;
        Ok(worst.max(a.distance(&b)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub tolerances: Tolerances,
    /// Number of sampled density matrices for state-based checks.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            samples: 50,
            seed: 42,
        }
    }
}

/// Verdicts for the induced map (`full_linear`) and its CP affine part at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapAnalysisReport {
    pub label: String,
    pub time: f64,
    /// Smallest Choi eigenvalue of the full linear map.
    pub min_choi_eigenvalue: f64,
    pub is_cp: bool,
    pub cp_part_min_choi_eigenvalue: f64,
    pub cp_part_is_cp: bool,
    /// `‖L(1) − 1‖_F` of the CP part.
    pub cp_part_unitality_residual: f64,
    /// Trace-preservation residual of the full linear map.
    pub trace_residual: f64,
    /// Hermiticity-preservation residual of the full linear map.
    pub hermiticity_residual: f64,
    pub min_output_eigenvalue_over_samples: f64,
    /// Affine `(L, K)` versus full linear map on the sampled states.
    pub equivalence_residual: f64,
    /// `‖K‖_F`.
    pub offset_norm: f64,
    pub d_parameters: Vec<f64>,
}

pub fn analyze_decomposition(
    label: &str,
    time: f64,
    dec: &AffineDecomposition,
    samples: &[DensityMatrix],
    tol: &Tolerances,
) -> Result<MapAnalysisReport> {
    let full = is_completely_positive(&dec.full_linear, tol)?;
    let cp_part = is_completely_positive(&dec.cp_part, tol)?;
    let affine = dec.affine();
    let physicality = check_affine_physicality(&affine, samples)?;
    Ok(MapAnalysisReport {
        label: label.to_string(),
        time,
        min_choi_eigenvalue: full.min_eigenvalue,
        is_cp: full.is_cp,
        cp_part_min_choi_eigenvalue: cp_part.min_eigenvalue,
        cp_part_is_cp: cp_part.is_cp,
        cp_part_unitality_residual: dec
            .cp_part
            .image_of_identity()
            .distance(&ComplexMatrix::identity(dec.dim())),
        trace_residual: check_trace_preserving(&dec.full_linear),
        hermiticity_residual: hermiticity_residual(&dec.full_linear),
        min_output_eigenvalue_over_samples: physicality.min_output_eigenvalue,
        equivalence_residual: equivalence_residual(&affine, &dec.full_linear, samples)?,
        offset_norm: dec.offset.frobenius_norm(),
        d_parameters: d_parameters(dec),
    })
}

/// One report per time, ordered by `t`. Time points are evaluated in parallel.
pub fn time_sweep(
    scn: &JointScenario,
    assignment: &InitialAssignment,
    times: &[f64],
    config: &AnalysisConfig,
) -> Result<Vec<MapAnalysisReport>> {
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sweep time {t} is not finite"
        )));
    }
    assignment.validate(scn)?;
    let samples = sample_density_matrices(scn.system_dim(), config.samples, config.seed);
    let mut times = times.to_vec();
    times.sort_by(f64::total_cmp);
    times
        .par_iter()
        .map(|&t| {
            let dec = affine_decomposition(scn, assignment, t)?;
            analyze_decomposition(scn.label(), t, &dec, &samples, &config.tolerances)
        })
        .collect()
}

/// `steps` evenly spaced points from `start` to `stop` inclusive.
pub fn time_grid(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "time grid needs at least one step".into(),
        ));
    }
    if !(start.is_finite() && stop.is_finite()) || stop < start {
        return Err(Error::InvalidArgument(format!(
            "invalid time grid: start {start}, stop {stop}"
        )));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let h = (stop - start) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                stop
            } else {
                start + h * k as f64
            }
        })
        .collect())
}
