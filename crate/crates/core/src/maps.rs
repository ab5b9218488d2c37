//! Linear and affine maps on `N×N` matrices.
//!
//! A linear map is stored as the images of the basis elements: `images[0]`
//! is the image of the identity (`1′`) and `images[α]` the image of `F_α`.
//! The action on an arbitrary `Q = Σ_μ c_μ F_μ` follows by linearity.
//!
//! An affine map `M(Q) = L(Q) + K` is a linear part plus a constant offset.
//! On unit-trace inputs the two descriptions are interchangeable:
//!
//! * affine → linear: `1′ = L(1) + N·K`, `F′_α = L(F_α)`;
//! * linear → affine: the split of `1′` into `L(1)` and `K` is not unique.
//!   This module always picks the unital split `L(1) = 1`, `K = (1′ − 1)/N`.

use std::sync::Arc;

use crate::basis::HermitianBasis;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearMatrixMap {
    basis: Arc<HermitianBasis>,
    images: Vec<ComplexMatrix>,
}

impl LinearMatrixMap {
    pub fn new(basis: Arc<HermitianBasis>, images: Vec<ComplexMatrix>) -> Result<Self> {
        if images.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: images.len(),
            });
        }
        for image in &images {
            image.check_dim(basis.dim())?;
        }
        Ok(Self { basis, images })
    }

    /// The map whose images are the basis elements themselves.
    pub fn identity(basis: Arc<HermitianBasis>) -> Self {
        let images = basis.elements().to_vec();
        Self { basis, images }
    }

    pub fn zero(basis: Arc<HermitianBasis>) -> Self {
        let images = vec![ComplexMatrix::zeros(basis.dim()); basis.len()];
        Self { basis, images }
    }

    /// Tabulates a linear function by evaluating it on every basis element.
    pub fn from_fn<F>(basis: Arc<HermitianBasis>, f: F) -> Result<Self>
    where
        F: Fn(&ComplexMatrix) -> ComplexMatrix,
    {
        let images = basis.elements().iter().map(f).collect();
        Self::new(basis, images)
    }

    /// `Q ↦ Qᵀ`, positive but not completely positive.
    pub fn transpose(basis: Arc<HermitianBasis>) -> Self {
        let images = basis
            .elements()
            .iter()
            .map(ComplexMatrix::transpose)
            .collect();
        Self { basis, images }
    }

    /// `Q ↦ V·Q·V†`.
    pub fn conjugation(basis: Arc<HermitianBasis>, v: &ComplexMatrix) -> Result<Self> {
        v.check_dim(basis.dim())?;
        Self::from_fn(basis, |f| f.conjugate_by(v))
    }

    pub fn basis(&self) -> &Arc<HermitianBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn images(&self) -> &[ComplexMatrix] {
        &self.images
    }

    pub fn image_of_identity(&self) -> &ComplexMatrix {
        &self.images[0]
    }

    pub fn image(&self, mu: usize) -> &ComplexMatrix {
        &self.images[mu]
    }

    pub fn apply(&self, q: &ComplexMatrix) -> Result<ComplexMatrix> {
        let c = self.basis.expand(q)?;
        self.basis.combine(c.as_slice(), &self.images)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMatrixMap) -> Result<LinearMatrixMap> {
        self.check_same_dim(inner.dim())?;
        let images = inner
            .images
            .iter()
            .map(|image| self.apply(image))
            .collect::<Result<_>>()?;
        Ok(Self {
            basis: self.basis.clone(),
            images,
        })
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: C64, other: &LinearMatrixMap, b: C64) -> Result<Self> {
        self.check_same_dim(other.dim())?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(x, y)| &x.scale(a) + &y.scale(b))
            .collect();
        Ok(Self {
            basis: self.basis.clone(),
            images,
        })
    }

    /// `max_μ ‖self.images[μ] − other.images[μ]‖_F`.
    pub fn max_image_deviation(&self, other: &LinearMatrixMap) -> f64 {
        self.images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    /// Same as [`max_image_deviation`](Self::max_image_deviation) restricted to `α ≥ 1`.
    pub fn max_traceless_image_deviation(&self, other: &LinearMatrixMap) -> f64 {
        self.images[1..]
            .iter()
            .zip(&other.images[1..])
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    fn check_same_dim(&self, other: usize) -> Result<()> {
        if self.dim() == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffineMatrixMap {
    linear: LinearMatrixMap,
    offset: ComplexMatrix,
}

impl AffineMatrixMap {
    pub fn new(linear: LinearMatrixMap, offset: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        offset.check_dim(linear.dim())?;
        offset.ensure_hermitian(tol.herm)?;
        Ok(Self { linear, offset })
    }

    /// The offset is taken as given; it is Hermitian exactly when the caller's is.
    pub(crate) fn new_unchecked(linear: LinearMatrixMap, offset: ComplexMatrix) -> Self {
        Self { linear, offset }
    }

    pub fn identity(basis: Arc<HermitianBasis>) -> Self {
        let dim = basis.dim();
        Self {
            linear: LinearMatrixMap::identity(basis),
            offset: ComplexMatrix::zeros(dim),
        }
    }

    pub fn linear_part(&self) -> &LinearMatrixMap {
        &self.linear
    }

    pub fn offset(&self) -> &ComplexMatrix {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn basis(&self) -> &Arc<HermitianBasis> {
        self.linear.basis()
    }

    pub fn apply(&self, q: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(&self.linear.apply(q)? + &self.offset)
    }

    /// `self ∘ first`: linear part `L2∘L1`, offset `L2(K1) + K2`.
    pub fn compose(&self, first: &AffineMatrixMap) -> Result<AffineMatrixMap> {
        let linear = self.linear.compose(&first.linear)?;
        let offset = &self.linear.apply(&first.offset)? + &self.offset;
        Ok(Self { linear, offset })
    }

    /// Linear map agreeing with `self` on every unit-trace matrix.
    pub fn to_linear(&self) -> LinearMatrixMap {
        let n = self.dim() as f64;
        let mut images = self.linear.images.clone();
        images[0].add_scaled(C64::new(n, 0.0), &self.offset);
        LinearMatrixMap {
            basis: self.linear.basis.clone(),
            images,
        }
    }
}

impl LinearMatrixMap {
    /// Affine map with unital linear part agreeing with `self` on every
    /// unit-trace matrix. `L(1)` is exactly the identity.
    pub fn to_affine(&self) -> AffineMatrixMap {
        let n = self.dim();
        let mut images = self.images.clone();
        images[0] = ComplexMatrix::identity(n);
        let offset = (&self.images[0] - &images[0]).scale_real(1.0 / n as f64);
        AffineMatrixMap::new_unchecked(
            LinearMatrixMap {
                basis: self.basis.clone(),
                images,
            },
            offset,
        )
    }
}

pub fn apply_linear(map: &LinearMatrixMap, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    map.apply(q)
}

pub fn apply_affine(map: &AffineMatrixMap, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    map.apply(q)
}

pub fn affine_to_linear(map: &AffineMatrixMap) -> LinearMatrixMap {
    map.to_linear()
}

pub fn linear_to_affine(map: &LinearMatrixMap) -> AffineMatrixMap {
    map.to_affine()
}

/// `second ∘ first`.
pub fn compose_affine(
    second: &AffineMatrixMap,
    first: &AffineMatrixMap,
) -> Result<AffineMatrixMap> {
    second.compose(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random::{
        ginibre, random_hermitian, sample_density_matrices, seeded_rng, MatrixRng,
    };
    use crate::matrix::{pauli, DensityMatrix, ZERO};
    use proptest::prelude::*;

    fn basis(n: usize) -> Arc<HermitianBasis> {
        Arc::new(HermitianBasis::new(n).unwrap())
    }

    fn random_linear(n: usize, rng: &mut MatrixRng) -> LinearMatrixMap {
        let b = basis(n);
        let images = (0..n * n).map(|_| ginibre(n, rng)).collect();
        LinearMatrixMap::new(b, images).unwrap()
    }

    fn random_affine(n: usize, rng: &mut MatrixRng) -> AffineMatrixMap {
        let linear = random_linear(n, rng);
        AffineMatrixMap::new(linear, random_hermitian(n, rng), &Tolerances::default()).unwrap()
    }

    /// `Σ_μ (Tr[F_μ Q]/N) · images[μ]` computed with full matrix products.
    fn brute_force_apply(map: &LinearMatrixMap, q: &ComplexMatrix) -> ComplexMatrix {
        let n = map.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (f, image) in map.basis().elements().iter().zip(map.images()) {
            let c = (f * q).trace() / n as f64;
            out = &out + &image.scale(c);
        }
        out
    }

    #[test]
    fn new_checks_shapes() {
        let b = basis(2);
        assert!(LinearMatrixMap::new(b.clone(), vec![ComplexMatrix::identity(2); 3]).is_err());
        assert!(LinearMatrixMap::new(b, vec![ComplexMatrix::identity(3); 4]).is_err());
    }

    #[test]
    fn identity_and_zero_maps() {
        let mut rng = seeded_rng(31);
        let q = ginibre(3, &mut rng);
        let id = LinearMatrixMap::identity(basis(3));
        assert!(id.apply(&q).unwrap().distance(&q) < 1e-13);
        let zero = LinearMatrixMap::zero(basis(3));
        assert_eq!(zero.apply(&q).unwrap(), ComplexMatrix::zeros(3));
    }

    #[test]
    fn apply_matches_direct_summation() {
        let mut rng = seeded_rng(32);
        for n in 1..=4 {
            let map = random_linear(n, &mut rng);
            let q = ginibre(n, &mut rng);
            assert!(
                map.apply(&q)
                    .unwrap()
                    .distance(&brute_force_apply(&map, &q))
                    <= 1e-12
            );
        }
    }

    #[test]
    fn apply_dimension_mismatch() {
        let id = LinearMatrixMap::identity(basis(2));
        assert!(matches!(
            id.apply(&ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn affine_offset_zero_is_linear() {
        let mut rng = seeded_rng(33);
        let linear = random_linear(3, &mut rng);
        let m = AffineMatrixMap::new(
            linear.clone(),
            ComplexMatrix::zeros(3),
            &Tolerances::default(),
        )
        .unwrap();
        let q = ginibre(3, &mut rng);
        assert_eq!(m.apply(&q).unwrap(), linear.apply(&q).unwrap());
    }

    #[test]
    fn affine_identity_plus_offset() {
        let mut rng = seeded_rng(34);
        let k = random_hermitian(2, &mut rng);
        let m = AffineMatrixMap::new(
            LinearMatrixMap::identity(basis(2)),
            k.clone(),
            &Tolerances::default(),
        )
        .unwrap();
        let q = ginibre(2, &mut rng);
        assert!(m.apply(&q).unwrap().distance(&(&q + &k)) < 1e-13);
    }

    #[test]
    fn affine_rejects_non_hermitian_offset() {
        let r = AffineMatrixMap::new(
            LinearMatrixMap::identity(basis(2)),
            ComplexMatrix::unit(2, 0, 1),
            &Tolerances::default(),
        );
        assert!(matches!(r, Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn mixture_law() {
        let mut rng = seeded_rng(35);
        let m = random_affine(3, &mut rng);
        let states = sample_density_matrices(3, 2, 7);
        let (rho, sigma) = (&states[0], &states[1]);
        let q = 0.3;
        let lhs = m.apply(rho.mix(sigma, q).matrix()).unwrap();
        let rhs = &m.apply(rho.matrix()).unwrap().scale_real(q)
            + &m.apply(sigma.matrix()).unwrap().scale_real(1.0 - q);
        assert!(lhs.distance(&rhs) <= 1e-12);
    }

    #[test]
    fn affine_to_linear_examples() {
        let id = AffineMatrixMap::identity(basis(2));
        assert_eq!(id.to_linear(), LinearMatrixMap::identity(basis(2)));

        let k = pauli::z().scale_real(0.5);
        let m = AffineMatrixMap::new(
            LinearMatrixMap::identity(basis(2)),
            k,
            &Tolerances::default(),
        )
        .unwrap();
        let t = m.to_linear();
        assert_eq!(
            t.image_of_identity(),
            &(&ComplexMatrix::identity(2) + &pauli::z())
        );
        for alpha in 1..4 {
            assert_eq!(t.image(alpha), m.basis().element(alpha));
        }
    }

    #[test]
    fn affine_to_linear_agrees_on_states() {
        let mut rng = seeded_rng(36);
        let m = random_affine(3, &mut rng);
        let t = m.to_linear();
        let worst = sample_density_matrices(3, 50, 100)
            .iter()
            .map(|rho| {
                m.apply(rho.matrix())
                    .unwrap()
                    .distance(&t.apply(rho.matrix()).unwrap())
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10);
    }

    #[test]
    fn linear_to_affine_identity() {
        let m = LinearMatrixMap::identity(basis(3)).to_affine();
        assert_eq!(m.linear_part(), &LinearMatrixMap::identity(basis(3)));
        assert!(m.offset().frobenius_norm() < 1e-15);
    }

    #[test]
    fn replacement_map_becomes_pure_offset() {
        let n = 3;
        let b = basis(n);
        let rho0 = crate::matrix::sample_density_matrix(n, 5).into_matrix();
        // T(Q) = Tr[Q]·ρ0, so 1′ = N·ρ0 and F′_α = 0.
        let t = LinearMatrixMap::from_fn(b.clone(), |q| rho0.scale(q.trace())).unwrap();
        assert!(t.image_of_identity().distance(&rho0.scale_real(n as f64)) < 1e-14);

        let m = t.to_affine();
        let expected_k = &rho0 - &ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        assert!(m.offset().distance(&expected_k) < 1e-14);
        assert_eq!(
            m.linear_part().image_of_identity(),
            &ComplexMatrix::identity(n)
        );
        for alpha in 1..n * n {
            assert!(m.linear_part().image(alpha).frobenius_norm() < 1e-14);
        }
        for rho in sample_density_matrices(n, 20, 40) {
            assert!(m.apply(rho.matrix()).unwrap().distance(&rho0) < 1e-12);
        }
    }

    #[test]
    fn conversion_round_trip() {
        let mut rng = seeded_rng(37);
        let t = random_linear(3, &mut rng);
        let back = t.to_affine().to_linear();
        assert!(back.max_image_deviation(&t) <= 1e-12);
    }

    #[test]
    fn compose_examples() {
        let mut rng = seeded_rng(38);
        let m = random_affine(2, &mut rng);
        let id = AffineMatrixMap::identity(basis(2));
        assert!(
            m.compose(&id)
                .unwrap()
                .to_linear()
                .max_image_deviation(&m.to_linear())
                < 1e-13
        );
        assert!(
            id.compose(&m)
                .unwrap()
                .to_linear()
                .max_image_deviation(&m.to_linear())
                < 1e-13
        );

        let k1 = random_hermitian(2, &mut rng);
        let k2 = random_hermitian(2, &mut rng);
        let tol = Tolerances::default();
        let m1 =
            AffineMatrixMap::new(LinearMatrixMap::identity(basis(2)), k1.clone(), &tol).unwrap();
        let m2 =
            AffineMatrixMap::new(LinearMatrixMap::identity(basis(2)), k2.clone(), &tol).unwrap();
        let c = compose_affine(&m2, &m1).unwrap();
        assert!(c.offset().distance(&(&k1 + &k2)) < 1e-13);
        assert!(
            c.linear_part()
                .max_image_deviation(&LinearMatrixMap::identity(basis(2)))
                < 1e-13
        );
    }

    #[test]
    fn compose_dimension_mismatch() {
        let a = AffineMatrixMap::identity(basis(2));
        let b = AffineMatrixMap::identity(basis(3));
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn transpose_map_transposes() {
        let mut rng = seeded_rng(39);
        let q = ginibre(3, &mut rng);
        let t = LinearMatrixMap::transpose(basis(3));
        assert!(t.apply(&q).unwrap().distance(&q.transpose()) < 1e-13);
    }

    #[test]
    fn linear_combination_acts_pointwise() {
        let mut rng = seeded_rng(40);
        let t1 = random_linear(2, &mut rng);
        let t2 = random_linear(2, &mut rng);
        let (a, b) = (C64::new(0.5, 1.0), C64::new(-2.0, ZERO.im));
        let sum = t1.linear_combination(a, &t2, b).unwrap();
        let q = ginibre(2, &mut rng);
        let expected = &t1.apply(&q).unwrap().scale(a) + &t2.apply(&q).unwrap().scale(b);
        assert!(sum.apply(&q).unwrap().distance(&expected) < 1e-12);
    }

    proptest! {
        #[test]
        fn mixture_law_holds(seed in any::<u64>(), n in 2usize..4, q in 0.01f64..0.99) {
            let mut rng = seeded_rng(seed);
            let m = random_affine(n, &mut rng);
            let rho = DensityMatrix::new(crate::matrix::sample_density_matrix(n, seed).into_matrix(), &Tolerances::default()).unwrap();
            let sigma = crate::matrix::sample_density_matrix(n, seed.wrapping_add(1));
            let lhs = m.apply(rho.mix(&sigma, q).matrix()).unwrap();
            let rhs = &m.apply(rho.matrix()).unwrap().scale_real(q)
                + &m.apply(sigma.matrix()).unwrap().scale_real(1.0 - q);
            prop_assert!(lhs.distance(&rhs) <= 1e-12);
        }

        #[test]
        fn composition_is_sequential(seed in any::<u64>(), n in 1usize..4) {
            let mut rng = seeded_rng(seed);
            let m1 = random_affine(n, &mut rng);
            let m2 = random_affine(n, &mut rng);
            let q = ginibre(n, &mut rng);
            let composed = m2.compose(&m1).unwrap().apply(&q).unwrap();
            let sequential = m2.apply(&m1.apply(&q).unwrap()).unwrap();
            prop_assert!(composed.distance(&sequential) <= 1e-12 * (1.0 + sequential.frobenius_norm()));
        }

        #[test]
        fn linear_to_affine_is_unital_and_equivalent(seed in any::<u64>(), n in 1usize..4) {
            let mut rng = seeded_rng(seed);
            let t = random_linear(n, &mut rng);
            let m = t.to_affine();
            prop_assert_eq!(m.linear_part().image_of_identity(), &ComplexMatrix::identity(n));
            for rho in sample_density_matrices(n, 10, seed) {
                let d = m.apply(rho.matrix()).unwrap().distance(&t.apply(rho.matrix()).unwrap());
                prop_assert!(d <= 1e-10);
            }
        }
    }
}
