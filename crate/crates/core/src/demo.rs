//! The bundled two-qubit demo: a system qubit coupled to an environment
//! qubit through a Heisenberg exchange with distinct local fields, started
//! from a correlated initial-state assignment.
//!
//! The parameters below come from `cargo run --example demo_search`. They
//! are chosen so that the assignment yields a genuine joint state for the
//! maximally mixed system state and the induced linear map fails complete
//! positivity somewhere on `t ∈ [0, 5]`.

use crate::dynamics::{InitialAssignment, JointScenario};
use crate::error::Result;
use crate::io::{Scenario, TimeGridSpec};
use crate::matrix::{kron, pauli, ComplexMatrix};
use crate::tolerance::Tolerances;

pub const DEMO_LABEL: &str = "two-qubit-correlated-demo";

pub const DEMO_GRID: TimeGridSpec = TimeGridSpec {
    start: 0.0,
    stop: 5.0,
    steps: 101,
};

/// Least Choi eigenvalue the demo's full map must reach somewhere on the grid.
pub const DEMO_WITNESS_THRESHOLD: f64 = -1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoHamiltonian {
    /// Coefficient of `σ_z ⊗ 1`.
    pub system_z: f64,
    /// Coefficient of `σ_x ⊗ 1`.
    pub system_x: f64,
    /// Coefficient of `1 ⊗ σ_z`.
    pub env_z: f64,
    /// Coefficient of `σ_x⊗σ_x + σ_y⊗σ_y + σ_z⊗σ_z`.
    pub exchange: f64,
}

pub const DEMO_HAMILTONIAN: DemoHamiltonian = DemoHamiltonian {
    system_z: 0.5,
    system_x: 0.3,
    env_z: 0.2,
    exchange: 0.4,
};

impl DemoHamiltonian {
    pub fn matrix(&self) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        let mut h = kron(&pauli::z(), &id).scale_real(self.system_z);
        h += &kron(&pauli::x(), &id).scale_real(self.system_x);
        h += &kron(&id, &pauli::z()).scale_real(self.env_z);
        for s in [pauli::x(), pauli::y(), pauli::z()] {
            h += &kron(&s, &s).scale_real(self.exchange);
        }
        h
    }
}

/// Environment means `(b_x, b_y, b_z)` and the 3×3 correlations `c_αβ`
/// over `α, β ∈ {x, y, z}`.
pub fn demo_assignment() -> InitialAssignment {
    InitialAssignment {
        env_means: vec![0.0, 0.0, 0.2],
        correlations: vec![
            vec![-0.4, 0.0, 0.0],
            vec![0.0, -0.4, 0.0],
            vec![0.0, 0.0, -0.4],
        ],
    }
}

pub fn demo_scenario(zero_correlations: bool) -> Result<Scenario> {
    let tol = Tolerances::default();
    let joint = JointScenario::new(DEMO_LABEL, 2, 2, DEMO_HAMILTONIAN.matrix(), &tol)?;
    let mut assignment = demo_assignment();
    if zero_correlations {
        assignment = assignment.zeroed();
    }
    let joint = if zero_correlations {
        joint.with_label(format!("{DEMO_LABEL}-zeroed"))
    } else {
        joint
    };
    Ok(Scenario {
        joint,
        assignment,
        times: Some(DEMO_GRID),
    })
}
