//! Linear and affine maps of density matrices.
//!
//! Any affine map `M(Q) = L(Q) + K` on `N×N` matrices agrees on density
//! matrices with a linear map, and conversely. For subsystem dynamics
//! induced by unitary evolution of a larger system the induced linear map is
//! generally not completely positive, while the linear part of the
//! equivalent affine map with `L(1) = 1` is completely positive and equals
//! `(1/M)·Tr_R[e^{-iHt} (ρ ⊗ 1_R) e^{iHt}]`.
//!
//! Modules, bottom-up:
//!
//! * [`matrix`]: dense complex matrices, eigendecomposition, propagators,
//!   Kronecker products, partial traces, random states;
//! * [`basis`]: the Hermitian operator basis and coefficient expansions;
//! * [`maps`]: linear and affine maps and conversions between them;
//! * [`dynamics`]: reduced dynamics of a subsystem;
//! * [`analysis`]: Choi matrices, CP verdicts, residuals, time sweeps;
//! * [`io`], [`demo`], [`acceptance`]: file formats, the bundled demo and the self-test.

pub mod acceptance;
pub mod analysis;
pub mod basis;
pub mod cli;
pub mod demo;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod maps;
pub mod matrix;
pub mod tolerance;

pub use analysis::{
    check_affine_physicality, check_trace_preserving, choi_matrix, equivalence_residual,
    is_completely_positive, time_grid, time_sweep, AnalysisConfig, ChoiMatrix, CpVerdict,
    MapAnalysisReport,
};
pub use basis::{CoefficientVector, HermitianBasis};
pub use dynamics::{
    affine_decomposition, assignment_extend, assignment_is_physical, cp_linear_part, d_parameters,
    full_linear_map, AffineDecomposition, InitialAssignment, JointScenario,
};
pub use error::{Error, Result};
pub use io::Scenario;
pub use maps::{
    affine_to_linear, apply_affine, apply_linear, compose_affine, linear_to_affine,
    AffineMatrixMap, LinearMatrixMap,
};
pub use matrix::{
    hermitian_eigendecompose, kron, partial_trace_env, propagator, sample_density_matrix,
    ComplexMatrix, DensityMatrix, HermitianEigen, UnitaryPropagator, C64,
};
pub use tolerance::Tolerances;
