//! Dense complex matrices and the primitives the rest of the crate is built on.
//!
//! Tensor products always put the system factor on the left and the
//! environment factor on the right: a joint index is `i * M + k` for system
//! index `i` and environment index `k`.

mod density;
pub(crate) mod eigen;
pub mod random;

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use density::DensityMatrix;
pub use eigen::{hermitian_eigendecompose, propagator, HermitianEigen, UnitaryPropagator};
pub use random::sample_density_matrix;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A square dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Matrix unit `E_ij`: a single one at `(row, col)`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(row, col)] = ONE;
        m
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    /// Build from row-major rows, rejecting ragged, non-square or non-finite input.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if let Some(j) = row
                .iter()
                .position(|z| !(z.re.is_finite() && z.im.is_finite()))
            {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    /// Build from `2 * dim * dim` interleaved `(re, im)` values in row-major order.
    pub fn from_interleaved(dim: usize, data: &[f64]) -> Result<Self> {
        if data.len() != 2 * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: 2 * dim * dim,
                found: data.len(),
            });
        }
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let k = 2 * (i * dim + j);
                        C64::new(data[k], data[k + 1])
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn to_interleaved(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                out.push(z.re);
                out.push(z.im);
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)]).collect())
            .collect()
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let n = self.dim();
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self[(i, j)] * other[(j, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(
            self.dim(),
            other.dim(),
            "distance between matrices of different dims"
        );
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                residual,
                tolerance: tol,
            })
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

/// Kronecker product `a ⊗ b` (system factor on the left).
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Trace over the right (environment) factor of an `(N·M) × (N·M)` matrix.
///
/// `Y[i][j] = Σ_k X[iM+k][jM+k]`.
pub fn partial_trace_env(x: &ComplexMatrix, n: usize, m: usize) -> Result<ComplexMatrix> {
    x.check_dim(n * m)?;
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (0..m).map(|k| x[(i * m + k, j * m + k)]).sum()
    }))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl ComplexMatrix {
    /// `self += s · other`.
    pub fn add_scaled(&mut self, s: C64, other: &ComplexMatrix) {
        self.0.zip_apply(&other.0, |a, b| *a += s * b);
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

// On the wire a matrix is a list of rows, each row a list of `[re, im]` pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Pauli matrices, used by the demo scenario and throughout the tests.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| {
            if i != j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => C64::new(0.0, 0.0),
        })
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }
}

#[cfg(test)]
mod tests {
    use super::random::{ginibre, seeded_rng};
    use super::*;

    #[test]
    fn kron_with_scalar_unit_is_noop() {
        let mut rng = seeded_rng(1);
        let a = ginibre(3, &mut rng);
        assert!(kron(&a, &ComplexMatrix::identity(1)).distance(&a) == 0.0);
    }

    #[test]
    fn kron_of_identities() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(k, ComplexMatrix::identity(6));
    }

    #[test]
    fn kron_trace_multiplicative() {
        let mut rng = seeded_rng(2);
        let a = ginibre(2, &mut rng);
        let b = ginibre(3, &mut rng);
        let lhs = kron(&a, &b).trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn kron_puts_system_on_the_left() {
        // [[0,1],[0,0]] ⊗ I2 places the identity block in the top-right corner.
        let k = kron(&ComplexMatrix::unit(2, 0, 1), &ComplexMatrix::identity(2));
        assert_eq!(k[(0, 2)], ONE);
        assert_eq!(k[(1, 3)], ONE);
        assert_eq!(k[(0, 1)], ZERO);
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = seeded_rng(3);
        let a = ginibre(2, &mut rng);
        let b = ginibre(3, &mut rng);
        let y = partial_trace_env(&kron(&a, &b), 2, 3).unwrap();
        assert!(y.distance(&a.scale(b.trace())) <= 1e-12);
    }

    #[test]
    fn partial_trace_of_identity() {
        let y = partial_trace_env(&ComplexMatrix::identity(6), 2, 3).unwrap();
        assert!(y.distance(&ComplexMatrix::identity(2).scale_real(3.0)) == 0.0);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = seeded_rng(4);
        let x = ginibre(6, &mut rng);
        let y = partial_trace_env(&x, 3, 2).unwrap();
        assert!((y.trace() - x.trace()).norm() <= 1e-12);
    }

    #[test]
    fn partial_trace_rejects_wrong_dim() {
        let err = partial_trace_env(&ComplexMatrix::identity(5), 2, 3).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 6,
                found: 5
            }
        ));
    }

    #[test]
    fn partial_trace_is_linear() {
        let mut rng = seeded_rng(5);
        let x = ginibre(4, &mut rng);
        let y = ginibre(4, &mut rng);
        let s = C64::new(0.3, -1.7);
        let lhs = partial_trace_env(&(&x + &y.scale(s)), 2, 2).unwrap();
        let rhs =
            &partial_trace_env(&x, 2, 2).unwrap() + &partial_trace_env(&y, 2, 2).unwrap().scale(s);
        assert!(lhs.distance(&rhs) <= 1e-12);
    }

    #[test]
    fn from_rows_rejects_bad_input() {
        assert!(ComplexMatrix::from_rows(vec![vec![ONE, ONE], vec![ONE]]).is_err());
        let err = ComplexMatrix::from_rows(vec![vec![C64::new(f64::NAN, 0.0)]]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, col: 0 }));
    }

    #[test]
    fn json_layout_is_rows_of_pairs() {
        let json = serde_json::to_string(&pauli::y()).unwrap();
        assert_eq!(json, "[[[0.0,0.0],[0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]");
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, pauli::y());
    }

    #[test]
    fn interleaved_round_trip() {
        let mut rng = seeded_rng(6);
        let a = ginibre(3, &mut rng);
        let b = ComplexMatrix::from_interleaved(3, &a.to_interleaved()).unwrap();
        assert_eq!(a, b);
    }
}
