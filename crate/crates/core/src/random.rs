//! Seeded random instances: Hermitian matrices, full-rank states and Pauli
//! Hamiltonians. Everything is driven by a caller-supplied RNG so that runs
//! are reproducible.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, ComplexMatrix, DensityMatrix, HermitianMatrix, C64};

/// Deterministic generator used throughout the crate and its tests.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Square matrix with i.i.d. standard complex Gaussian entries.
pub fn random_complex<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let entries: Vec<C64> = (0..dim * dim)
        .map(|_| c64(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2)
        .collect();
    ComplexMatrix::from_row_major(dim, &entries).expect("square by construction")
}

/// GUE-style Hermitian matrix rescaled to spectral radius at most `radius`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, radius: f64, rng: &mut R) -> HermitianMatrix {
    let h = HermitianMatrix::symmetrize(random_complex(dim, rng));
    let vals = crate::linalg::eigvalsh(&h).expect("finite Gaussian matrix");
    let rho = vals[0].abs().max(vals[dim - 1].abs());
    if rho == 0.0 {
        return h;
    }
    let scale = radius * rng.random_range(0.2..=1.0) / rho;
    h.scale(scale)
}

/// Full-rank density matrix `GG†/Tr(GG†)` from a Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = random_complex(dim, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    let h = HermitianMatrix::symmetrize(w.scale(c64(1.0 / tr, 0.0)));
    DensityMatrix::new(h).expect("Ginibre product is a valid state")
}

/// Full-rank state whose smallest eigenvalue is bounded below by mixing with
/// the maximally mixed state.
pub fn random_mixed_density<R: Rng + ?Sized>(dim: usize, purity_weight: f64, rng: &mut R) -> DensityMatrix {
    let rho = random_density(dim, rng);
    let mixed = DensityMatrix::maximally_mixed(dim);
    let m = &rho.scale(purity_weight) + &mixed.scale(1.0 - purity_weight);
    DensityMatrix::new(m).expect("convex combination of states")
}

/// Random unit vector in ℝ^len.
pub fn random_unit_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Vector with i.i.d. standard normal entries scaled by `scale`.
pub fn random_gaussian_vector<R: Rng + ?Sized>(len: usize, scale: f64, rng: &mut R) -> Vec<f64> {
    (0..len).map(|_| scale * gaussian(rng)).collect()
}

/// Real `rows×cols` Gaussian matrix, used for random linear maps in tests.
pub fn random_real<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}
