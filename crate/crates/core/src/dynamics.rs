//! Subsystem dynamics induced by unitary evolution of a system `S` (dim `N`)
//! coupled to the rest `R` (dim `M`).
//!
//! A subsystem matrix `Q` is lifted to the joint space by a linear
//! *assignment*
//!
//! ```text
//! A(Q) = (1/M)·[ Q ⊗ 1_M + (Tr Q / N)·( Σ_β b_β·(1_N ⊗ G_β) + Σ_αβ c_αβ·(F_α ⊗ G_β) ) ]
//! ```
//!
//! evolved with `U = e^{-iHt}` and traced over `R`. The environment means
//! `b` and correlations `c` only touch the trace component, so every
//! traceless `F_α` is lifted to `F_α ⊗ 1_M/M` whatever they are. With
//! `b = c = 0` the map is `L(Q) = (1/M)·Tr_R[U (Q ⊗ 1_M) U†]`, which is
//! unital and completely positive. Otherwise the induced linear map equals
//! `L(Q) + Tr(Q)·K`: the affine map `(L, K)` with `L` completely positive.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::basis::HermitianBasis;
use crate::error::{Error, Result};
use crate::maps::{AffineMatrixMap, LinearMatrixMap};
use crate::matrix::{
    eigen::eigendecompose_hermitian_part, kron, partial_trace_env, ComplexMatrix, DensityMatrix,
    HermitianEigen, C64,
};
use crate::tolerance::Tolerances;

/// System and environment dimensions plus a joint Hamiltonian on `S ⊗ R`.
#[derive(Debug, Clone)]
pub struct JointScenario {
    label: String,
    system_dim: usize,
    env_dim: usize,
    hamiltonian: ComplexMatrix,
    spectrum: HermitianEigen,
    system_basis: Arc<HermitianBasis>,
    env_basis: Arc<HermitianBasis>,
}

impl PartialEq for JointScenario {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && self.system_dim == other.system_dim
            && self.env_dim == other.env_dim
            && self.hamiltonian == other.hamiltonian
    }
}

impl JointScenario {
    pub fn new(
        label: impl Into<String>,
        system_dim: usize,
        env_dim: usize,
        hamiltonian: ComplexMatrix,
        tol: &Tolerances,
    ) -> Result<Self> {
        if system_dim == 0 {
            return Err(Error::scenario("system_dim", "must be at least 1"));
        }
        if env_dim == 0 {
            return Err(Error::scenario("env_dim", "must be at least 1"));
        }
        if hamiltonian.dim() != system_dim * env_dim {
            return Err(Error::scenario(
                "hamiltonian",
                format!(
                    "dimension {} does not equal system_dim * env_dim = {}",
                    hamiltonian.dim(),
                    system_dim * env_dim
                ),
            ));
        }
        hamiltonian.ensure_hermitian(tol.herm)?;
        let spectrum = eigendecompose_hermitian_part(&hamiltonian)?;
        Ok(Self {
            label: label.into(),
            system_dim,
            env_dim,
            hamiltonian,
            spectrum,
            system_basis: Arc::new(HermitianBasis::new(system_dim)?),
            env_basis: Arc::new(HermitianBasis::new(env_dim)?),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn system_basis(&self) -> &Arc<HermitianBasis> {
        &self.system_basis
    }

    pub fn env_basis(&self) -> &Arc<HermitianBasis> {
        &self.env_basis
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `e^{-iHt}` on the joint space.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        self.spectrum.propagator(t).matrix
    }

    /// `Tr_R[U X U†]`.
    fn evolve_and_reduce(&self, u: &ComplexMatrix, joint: &ComplexMatrix) -> ComplexMatrix {
        partial_trace_env(&joint.conjugate_by(u), self.system_dim, self.env_dim)
            .expect("joint operators are built with dimension N·M")
    }
}

/// Environment means `b_β` and system–environment correlations `c_αβ`
/// attached to the trace component of the lifted state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialAssignment {
    /// Length `M² − 1`.
    pub env_means: Vec<f64>,
    /// Shape `(N² − 1) × (M² − 1)`.
    pub correlations: Vec<Vec<f64>>,
}

impl InitialAssignment {
    /// `b = 0`, `c = 0`: the product lift `Q ⊗ 1_M/M`.
    pub fn product(system_dim: usize, env_dim: usize) -> Self {
        let (ns, ne) = (system_dim * system_dim - 1, env_dim * env_dim - 1);
        Self {
            env_means: vec![0.0; ne],
            correlations: vec![vec![0.0; ne]; ns],
        }
    }

    pub fn is_product(&self) -> bool {
        self.env_means.iter().all(|&b| b == 0.0)
            && self.correlations.iter().flatten().all(|&c| c == 0.0)
    }

    pub fn zeroed(&self) -> Self {
        Self {
            env_means: vec![0.0; self.env_means.len()],
            correlations: self
                .correlations
                .iter()
                .map(|row| vec![0.0; row.len()])
                .collect(),
        }
    }

    pub fn validate(&self, scn: &JointScenario) -> Result<()> {
        let ns = scn.system_dim * scn.system_dim - 1;
        let ne = scn.env_dim * scn.env_dim - 1;
        if self.env_means.len() != ne {
            return Err(Error::scenario(
                "assignment.env_means",
                format!("expected {ne} entries, found {}", self.env_means.len()),
            ));
        }
        if let Some(i) = self.env_means.iter().position(|b| !b.is_finite()) {
            return Err(Error::scenario(
                format!("assignment.env_means[{i}]"),
                "not finite",
            ));
        }
        if self.correlations.len() != ns {
            return Err(Error::scenario(
                "assignment.correlations",
                format!("expected {ns} rows, found {}", self.correlations.len()),
            ));
        }
        for (i, row) in self.correlations.iter().enumerate() {
            if row.len() != ne {
                return Err(Error::scenario(
                    format!("assignment.correlations[{i}]"),
                    format!("expected {ne} entries, found {}", row.len()),
                ));
            }
            if let Some(j) = row.iter().position(|c| !c.is_finite()) {
                return Err(Error::scenario(
                    format!("assignment.correlations[{i}][{j}]"),
                    "not finite",
                ));
            }
        }
        Ok(())
    }

    /// `Σ_β b_β·(1_N ⊗ G_β) + Σ_αβ c_αβ·(F_α ⊗ G_β)` on the joint space.
    fn correlation_operator(&self, scn: &JointScenario) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(scn.system_dim * scn.env_dim);
        let id_s = ComplexMatrix::identity(scn.system_dim);
        for (b, g) in self.env_means.iter().zip(scn.env_basis.traceless()) {
            if *b != 0.0 {
                out.add_scaled(C64::new(*b, 0.0), &kron(&id_s, g));
            }
        }
        for (row, f) in self.correlations.iter().zip(scn.system_basis.traceless()) {
            for (c, g) in row.iter().zip(scn.env_basis.traceless()) {
                if *c != 0.0 {
                    out.add_scaled(C64::new(*c, 0.0), &kron(f, g));
                }
            }
        }
        out
    }
}

/// Lifts a subsystem matrix to the joint space; `Tr_R[A(Q)] = Q`.
pub fn assignment_extend(
    a: &InitialAssignment,
    scn: &JointScenario,
    q: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    q.check_dim(scn.system_dim)?;
    a.validate(scn)?;
    Ok(Lift::new(a, scn).apply(q))
}

/// Precomputed pieces of `A(Q)`.
struct Lift<'a> {
    scn: &'a JointScenario,
    correlation: ComplexMatrix,
}

impl<'a> Lift<'a> {
    fn new(a: &InitialAssignment, scn: &'a JointScenario) -> Self {
        Self {
            scn,
            correlation: a.correlation_operator(scn),
        }
    }

    fn apply(&self, q: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.scn.system_dim, self.scn.env_dim);
        let mut joint = kron(q, &ComplexMatrix::identity(m));
        let weight = q.trace() / n as f64;
        if weight != C64::new(0.0, 0.0) {
            joint.add_scaled(weight, &self.correlation);
        }
        joint.scale_real(1.0 / m as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityCheck {
    pub physical: bool,
    pub min_eigenvalue: f64,
}

/// Whether `A(ρ)` is a genuine joint state (PSD within `tol.psd`).
pub fn assignment_is_physical(
    a: &InitialAssignment,
    scn: &JointScenario,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<PhysicalityCheck> {
    let joint = assignment_extend(a, scn, rho.matrix())?;
    let min_eigenvalue = eigendecompose_hermitian_part(&joint)?.min_eigenvalue();
    Ok(PhysicalityCheck {
        physical: min_eigenvalue >= -tol.psd,
        min_eigenvalue,
    })
}

fn cp_part_with(scn: &JointScenario, u: &ComplexMatrix) -> LinearMatrixMap {
    let id_env = ComplexMatrix::identity(scn.env_dim);
    let inv_m = 1.0 / scn.env_dim as f64;
    let images = scn
        .system_basis
        .elements()
        .iter()
        .map(|f| {
            scn.evolve_and_reduce(u, &kron(f, &id_env))
                .scale_real(inv_m)
        })
        .collect();
    LinearMatrixMap::new(scn.system_basis.clone(), images).expect("images are N×N by construction")
}

fn full_map_with(scn: &JointScenario, lift: &Lift<'_>, u: &ComplexMatrix) -> LinearMatrixMap {
    let images = scn
        .system_basis
        .elements()
        .iter()
        .map(|f| scn.evolve_and_reduce(u, &lift.apply(f)))
        .collect();
    LinearMatrixMap::new(scn.system_basis.clone(), images).expect("images are N×N by construction")
}

/// `L(Q) = (1/M)·Tr_R[e^{-iHt} (Q ⊗ 1_M) e^{iHt}]`.
pub fn cp_linear_part(scn: &JointScenario, t: f64) -> LinearMatrixMap {
    cp_part_with(scn, &scn.propagator(t))
}

/// `Q ↦ Tr_R[e^{-iHt} A(Q) e^{iHt}]`.
pub fn full_linear_map(
    scn: &JointScenario,
    a: &InitialAssignment,
    t: f64,
) -> Result<LinearMatrixMap> {
    a.validate(scn)?;
    Ok(full_map_with(scn, &Lift::new(a, scn), &scn.propagator(t)))
}

/// The induced linear map together with its unital affine split.
#[derive(Debug, Clone)]
pub struct AffineDecomposition {
    /// `L` with `L(1) = 1`; completely positive.
    pub cp_part: LinearMatrixMap,
    /// `K = (1′ − 1)/N`.
    pub offset: ComplexMatrix,
    /// The induced linear map with images `1′, F′_α`.
    pub full_linear: LinearMatrixMap,
}

impl AffineDecomposition {
    pub fn affine(&self) -> AffineMatrixMap {
        AffineMatrixMap::new_unchecked(self.cp_part.clone(), self.offset.clone())
    }

    pub fn dim(&self) -> usize {
        self.cp_part.dim()
    }
}

pub fn affine_decomposition(
    scn: &JointScenario,
    a: &InitialAssignment,
    t: f64,
) -> Result<AffineDecomposition> {
    a.validate(scn)?;
    let u = scn.propagator(t);
    let cp_part = cp_part_with(scn, &u);
    let full_linear = full_map_with(scn, &Lift::new(a, scn), &u);
    let n = scn.system_dim;
    let mut offset = full_linear.image_of_identity() - &ComplexMatrix::identity(n);
    offset = offset.scale_real(1.0 / n as f64);
    Ok(AffineDecomposition {
        cp_part,
        offset,
        full_linear,
    })
}

/// `d_α = Tr[F_α K]` for `α = 1 … N² − 1`.
pub fn d_parameters(dec: &AffineDecomposition) -> Vec<f64> {
    offset_d_parameters(dec.cp_part.basis(), &dec.offset)
}

pub fn offset_d_parameters(basis: &HermitianBasis, offset: &ComplexMatrix) -> Vec<f64> {
    basis
        .traceless()
        .iter()
        .map(|f| f.trace_product(offset).re)
        .collect()
}
