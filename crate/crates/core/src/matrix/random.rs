//! Seeded random matrices. Every generator is deterministic in its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, DensityMatrix, C64};

pub type MatrixRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> MatrixRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix of independent standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        entries.push(standard_complex(rng));
    }
    ComplexMatrix::from_fn(dim, |i, j| entries[i * dim + j])
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, rng).hermitian_part()
}

/// `G·G† / Tr[G·G†]` for a Ginibre matrix `G`.
pub fn ginibre_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rng);
    let gg = &g * &g.adjoint();
    let trace = gg.trace().re;
    let mut rho = gg.scale_real(1.0 / trace);
    // G·G† is Hermitian up to rounding; store it exactly Hermitian.
    rho = rho.hermitian_part();
    DensityMatrix::new_unchecked(rho)
}

/// Full-rank random density matrix, identical for identical `(dim, seed)`.
pub fn sample_density_matrix(dim: usize, seed: u64) -> DensityMatrix {
    assert!(dim >= 1, "density matrices need dim >= 1");
    ginibre_density(dim, &mut seeded_rng(seed))
}

/// `count` density matrices drawn from consecutive seeds starting at `seed`.
pub fn sample_density_matrices(dim: usize, count: usize, seed: u64) -> Vec<DensityMatrix> {
    (0..count as u64)
        .map(|k| sample_density_matrix(dim, seed.wrapping_add(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::Tolerances;

    #[test]
    fn dim_one_is_one() {
        let rho = sample_density_matrix(1, 99);
        assert!((rho.matrix()[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn samples_are_valid_states() {
        let tol = Tolerances::default();
        for dim in 1..=6 {
            for seed in 0..10 {
                let rho = sample_density_matrix(dim, seed);
                DensityMatrix::new(rho.matrix().clone(), &tol).unwrap();
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = sample_density_matrix(4, 7);
        let b = sample_density_matrix(4, 7);
        assert_eq!(a.matrix().to_interleaved(), b.matrix().to_interleaved());
        let c = sample_density_matrix(4, 8);
        assert_ne!(a.matrix().to_interleaved(), c.matrix().to_interleaved());
    }

    #[test]
    fn full_rank() {
        let rho = sample_density_matrix(5, 3);
        assert!(rho.min_eigenvalue().unwrap() > 1e-8);
    }
}
