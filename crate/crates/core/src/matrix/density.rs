use super::eigen::min_eigenvalue;
use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::NotDensityMatrix("non-finite entries".into()));
        }
        matrix.ensure_hermitian(tol.herm)?;
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > tol.eq {
            return Err(Error::NotDensityMatrix(format!(
                "trace {trace} differs from 1 by more than {:.3e}",
                tol.eq
            )));
        }
        let min = min_eigenvalue(&matrix)?;
        if min < -tol.psd {
            return Err(Error::NotDensityMatrix(format!(
                "eigenvalue {min:.3e} below -{:.3e}",
                tol.psd
            )));
        }
        Ok(Self(matrix))
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }

    /// `1/N`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        Self(ComplexMatrix::unit(dim, k, k))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.0)
    }

    /// `q·self + (1 − q)·other`.
    pub fn mix(&self, other: &Self, q: f64) -> Self {
        Self(&self.0.scale_real(q) + &other.0.scale_real(1.0 - q))
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}
