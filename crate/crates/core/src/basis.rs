//! Hermitian operator basis `{F_0 = 1, F_1, …, F_{N²−1}}` normalized so that
//! `Tr[F_μ F_ν] = N δ_μν`, and the coefficient expansion `Q = Σ_μ c_μ F_μ`
//! with `c_μ = Tr[F_μ Q] / N`.
//!
//! The traceless elements are generalized Gell-Mann matrices rescaled by
//! `√(N/2)`. Their order is fixed and part of the public contract:
//!
//! 1. symmetric `E_jk + E_kj` for `j < k`, lexicographic in `(j, k)`;
//! 2. antisymmetric `−i E_jk + i E_kj` for `j < k`, lexicographic;
//! 3. diagonal `Σ_{j<l} E_jj − l E_ll` for `l = 1, …, N−1`.
//!
//! At `N = 2` this is `{1, σ_x, σ_y, σ_z}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl HermitianBasis {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "basis dimension must be at least 1".into(),
            ));
        }
        let mut elements = Vec::with_capacity(dim * dim);
        elements.push(ComplexMatrix::identity(dim));

        let off_scale = (dim as f64 / 2.0).sqrt();
        let pairs: Vec<(usize, usize)> = (0..dim)
            .flat_map(|j| (j + 1..dim).map(move |k| (j, k)))
            .collect();
        for &(j, k) in &pairs {
            let mut f = ComplexMatrix::zeros(dim);
            f[(j, k)] = C64::new(off_scale, 0.0);
            f[(k, j)] = C64::new(off_scale, 0.0);
            elements.push(f);
        }
        for &(j, k) in &pairs {
            let mut f = ComplexMatrix::zeros(dim);
            f[(j, k)] = C64::new(0.0, -off_scale);
            f[(k, j)] = C64::new(0.0, off_scale);
            elements.push(f);
        }
        for l in 1..dim {
            let scale = (dim as f64 / (l * (l + 1)) as f64).sqrt();
            let mut diag = vec![0.0; dim];
            diag[..l].iter_mut().for_each(|d| *d = scale);
            diag[l] = -(l as f64) * scale;
            elements.push(ComplexMatrix::from_real_diagonal(&diag));
        }
        debug_assert_eq!(elements.len(), dim * dim);
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `N²`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn element(&self, mu: usize) -> &ComplexMatrix {
        &self.elements[mu]
    }

    /// The traceless elements `F_1 … F_{N²−1}`.
    pub fn traceless(&self) -> &[ComplexMatrix] {
        &self.elements[1..]
    }

    /// Matrix of `Tr[F_μ F_ν]`.
    pub fn gram_matrix(&self) -> Vec<Vec<C64>> {
        self.elements
            .iter()
            .map(|a| self.elements.iter().map(|b| a.trace_product(b)).collect())
            .collect()
    }

    /// `max_{μν} |Tr[F_μ F_ν] − N δ_μν|`.
    pub fn gram_residual(&self) -> f64 {
        let n = self.dim as f64;
        self.gram_matrix()
            .iter()
            .enumerate()
            .flat_map(|(mu, row)| {
                row.iter().enumerate().map(move |(nu, g)| {
                    let target = if mu == nu { n } else { 0.0 };
                    (g - C64::new(target, 0.0)).norm()
                })
            })
            .fold(0.0, f64::max)
    }

    /// `c_μ = Tr[F_μ Q] / N` for every `μ`.
    pub fn expand(&self, q: &ComplexMatrix) -> Result<CoefficientVector> {
        q.check_dim(self.dim)?;
        let inv_n = 1.0 / self.dim as f64;
        Ok(CoefficientVector(
            self.elements
                .iter()
                .map(|f| f.trace_product(q) * inv_n)
                .collect(),
        ))
    }

    /// `Q = Σ_μ c_μ F_μ`.
    pub fn reconstruct(&self, c: &CoefficientVector) -> Result<ComplexMatrix> {
        self.combine(c.as_slice(), &self.elements)
    }

    /// `Σ_μ c_μ · images[μ]`, the linear extension of a basis assignment.
    pub(crate) fn combine(
        &self,
        coeffs: &[C64],
        images: &[ComplexMatrix],
    ) -> Result<ComplexMatrix> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: coeffs.len(),
            });
        }
        let out_dim = images.first().map_or(self.dim, ComplexMatrix::dim);
        let mut out = ComplexMatrix::zeros(out_dim);
        for (c, image) in coeffs.iter().zip(images) {
            if *c != ZERO {
                out.add_scaled(*c, image);
            }
        }
        Ok(out)
    }
}

/// Expansion coefficients `(c_0, c_1, …, c_{N²−1})` of a matrix in a
/// [`HermitianBasis`]. For a density matrix `c_0 = 1/N` and `N·c_α = ⟨F_α⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector(Vec<C64>);

impl CoefficientVector {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Self(coeffs)
    }

    pub fn trace_part(&self) -> C64 {
        self.0[0]
    }

    pub fn traceless_part(&self) -> &[C64] {
        &self.0[1..]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every coefficient has `|Im c_μ| ≤ tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.0.iter().all(|c| c.im.abs() <= tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl From<Vec<C64>> for CoefficientVector {
    fn from(v: Vec<C64>) -> Self {
        Self(v)
    }
}
