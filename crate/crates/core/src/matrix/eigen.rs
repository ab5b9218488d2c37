use nalgebra::SymmetricEigen;

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const MAX_SWEEPS: usize = 10_000;

/// Spectral decomposition `A = V · diag(λ) · V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = self.eigenvectors.as_dmatrix();
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= w);
        }
        ComplexMatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| C64::new(l, 0.0))
    }

    /// `e^{-iHt}` for the matrix this decomposition came from.
    pub fn propagator(&self, time: f64) -> UnitaryPropagator {
        let matrix = self.map_spectrum(|l| C64::from_polar(1.0, -l * time));
        UnitaryPropagator {
            generator_dim: matrix.dim(),
            matrix,
            time,
        }
    }
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
pub fn hermitian_eigendecompose(a: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    a.ensure_hermitian(tol.herm)?;
    eigendecompose_hermitian_part(a)
}

/// Decomposes `(A + A†)/2` without checking how far `A` is from Hermitian.
pub(crate) fn eigendecompose_hermitian_part(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let dim = a.dim();
    if dim == 0 {
        return Ok(HermitianEigen {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0),
        });
    }
    let sym = a.hermitian_part().into_dmatrix();
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::ConvergenceFailure { dim })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(dim, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub(crate) fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigendecompose_hermitian_part(a)?.min_eigenvalue())
}

/// `e^{-iHt}` for Hermitian `H`, with `ħ = 1`.
#[derive(Debug, Clone)]
pub struct UnitaryPropagator {
    pub matrix: ComplexMatrix,
    pub generator_dim: usize,
    pub time: f64,
}

impl UnitaryPropagator {
    /// `‖U·U† − 1‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        (&self.matrix * &self.matrix.adjoint())
            .distance(&ComplexMatrix::identity(self.generator_dim))
    }
}

pub fn propagator(h: &ComplexMatrix, time: f64, tol: &Tolerances) -> Result<UnitaryPropagator> {
    Ok(hermitian_eigendecompose(h, tol)?.propagator(time))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;
    use crate::matrix::random::{random_hermitian, seeded_rng};
    use proptest::prelude::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eigendecompose(&ComplexMatrix::identity(2), &tol()).unwrap();
        assert_eq!(eig.eigenvalues.len(), 2);
        for l in &eig.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
        let gram = &eig.eigenvectors.adjoint() * &eig.eigenvectors;
        assert!(gram.distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let eig =
            hermitian_eigendecompose(&ComplexMatrix::from_real_diagonal(&[3.0, -1.0]), &tol())
                .unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = seeded_rng(11);
        let a = random_hermitian(4, &mut rng);
        let eig = hermitian_eigendecompose(&a, &tol()).unwrap();
        assert!(eig.reconstruct().distance(&a) <= 1e-10);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = hermitian_eigendecompose(&ComplexMatrix::unit(2, 0, 1), &tol()).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
        assert!(propagator(&ComplexMatrix::unit(2, 0, 1), 1.0, &tol()).is_err());
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let mut rng = seeded_rng(12);
        let h = random_hermitian(3, &mut rng);
        let u = propagator(&h, 0.0, &tol()).unwrap();
        assert!(u.matrix.distance(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn propagator_of_pauli_z() {
        let u = propagator(&pauli::z(), std::f64::consts::FRAC_PI_2, &tol()).unwrap();
        let expected = pauli::z().scale(C64::new(0.0, -1.0));
        assert!(u.matrix.distance(&expected) < 1e-14);
    }

    #[test]
    fn propagator_unitary_and_group_law() {
        let mut rng = seeded_rng(13);
        let h = random_hermitian(4, &mut rng);
        let u = propagator(&h, 0.7, &tol()).unwrap();
        let v = propagator(&h, -0.7, &tol()).unwrap();
        assert!(u.unitarity_residual() <= 1e-12);
        assert!((&u.matrix * &v.matrix).distance(&ComplexMatrix::identity(4)) <= 1e-12);
    }

    proptest! {
        #[test]
        fn reconstruction_holds(seed in any::<u64>(), dim in 1usize..7) {
            let mut rng = seeded_rng(seed);
            let a = random_hermitian(dim, &mut rng);
            let eig = hermitian_eigendecompose(&a, &tol()).unwrap();
            prop_assert!(eig.reconstruct().distance(&a) <= 1e-10);
        }

        #[test]
        fn propagator_composes(seed in any::<u64>(), s in -5.0f64..5.0, t in -5.0f64..5.0) {
            let mut rng = seeded_rng(seed);
            let h = random_hermitian(3, &mut rng);
            let us = propagator(&h, s, &tol()).unwrap().matrix;
            let ut = propagator(&h, t, &tol()).unwrap().matrix;
            let ust = propagator(&h, s + t, &tol()).unwrap().matrix;
            prop_assert!((&us * &ut).distance(&ust) <= 1e-10);
        }
    }
}
