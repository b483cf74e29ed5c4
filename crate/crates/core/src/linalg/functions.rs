use nalgebra::{DMatrix, SymmetricEigen};

use super::{c64, ComplexMatrix, DensityMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};

/// Eigenvalue gap below which the divided difference of `exp` is replaced by
/// its derivative limit.
pub const DIVIDED_DIFFERENCE_SWITCH: f64 = 1e-8;

/// Largest eigenvalue accepted by the unshifted exponential.
pub const EXP_OVERFLOW_LIMIT: f64 = 700.0;

/// Spectral decomposition `H = V·diag(λ)·V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub eigenvectors: ComplexMatrix,
}

impl EigDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `V·diag(f(λ))·V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.with_weights(&weights)
    }

    /// `V·diag(w)·V†` for precomputed weights.
    pub fn with_weights(&self, weights: &[f64]) -> HermitianMatrix {
        let v = self.eigenvectors.as_matrix();
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= c64(weights[k], 0.0);
        }
        HermitianMatrix::symmetrize(ComplexMatrix(scaled * v.adjoint()))
    }

    /// `V†·A·V`.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> DMatrix<C64> {
        let v = self.eigenvectors.as_matrix();
        v.adjoint() * a.as_matrix() * v
    }

    /// `V·A·V†`.
    pub fn from_eigenbasis(&self, a: &DMatrix<C64>) -> ComplexMatrix {
        let v = self.eigenvectors.as_matrix();
        ComplexMatrix(v * a * v.adjoint())
    }
}

fn max_off_diagonal(m: &DMatrix<C64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(h: &HermitianMatrix) -> Result<EigDecomposition> {
    let m = h.as_matrix();
    let dim = m.nrows();
    check_finite(m)?;
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 1000 * dim.max(1)).ok_or_else(
        || Error::EigenConvergence {
            dim,
            residual: max_off_diagonal(m),
        },
    )?;
    if eig.eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::EigenConvergence {
            dim,
            residual: max_off_diagonal(m),
        });
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix(vectors),
    })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let m = h.as_matrix();
    check_finite(m)?;
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    if vals.iter().any(|l| !l.is_finite()) {
        return Err(Error::EigenConvergence {
            dim: m.nrows(),
            residual: max_off_diagonal(m),
        });
    }
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn check_finite(m: &DMatrix<C64>) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::EigenConvergence {
            dim: m.nrows(),
            residual: f64::NAN,
        })
    }
}

/// `exp(H)`; rejects spectra whose largest eigenvalue exceeds 700.
pub fn matrix_exp(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eigh(h)?;
    let top = eig.max_eigenvalue();
    if top > EXP_OVERFLOW_LIMIT {
        return Err(Error::ExpOverflow(top));
    }
    Ok(eig.map_spectrum(f64::exp))
}

/// `log Σ exp(x_k)` without overflow. Terms below the maximum are summed via
/// `ln_1p`, which keeps full relative precision when they are tiny.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let (imax, &top) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("log_sum_exp of empty slice");
    let rest: f64 = values
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != imax)
        .map(|(_, &x)| (x - top).exp())
        .sum();
    top + rest.ln_1p()
}

/// `log Tr exp(H)`.
pub fn log_trace_exp(h: &HermitianMatrix) -> Result<f64> {
    Ok(log_sum_exp(&eigvalsh(h)?))
}

/// Von Neumann entropy in bits, with `0·log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = eigvalsh(rho)?;
    let s: f64 = vals
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    Ok(if s > 0.0 { s.min((vals.len() as f64).log2()) } else { 0.0 })
}

/// `|A| = (A†A)^{1/2}`.
pub fn psd_modulus(a: &ComplexMatrix) -> Result<HermitianMatrix> {
    let gram = HermitianMatrix::symmetrize(&a.adjoint() * a);
    let eig = eigh(&gram)?;
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}

/// `A^p` for positive semidefinite `A` and `p > 0`.
pub fn psd_power(a: &HermitianMatrix, p: f64) -> Result<HermitianMatrix> {
    let eig = eigh(a)?;
    let min = eig.min_eigenvalue();
    if min < -super::PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).powf(p)))
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.as_matrix().norm()
}

/// `⟨A, B⟩ = Tr(A†B)`.
pub fn hilbert_schmidt_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    a.check_same_dim(b)?;
    Ok(a.as_matrix().dotc(b.as_matrix()))
}

/// `½ Tr|ρ − σ|`.
pub fn trace_distance(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    rho.check_same_dim(sigma)?;
    let diff = rho - sigma;
    let vals = eigvalsh(&diff)?;
    Ok(0.5 * vals.iter().map(|l| l.abs()).sum::<f64>())
}

/// Fréchet derivative of the matrix exponential at a fixed Hermitian point,
/// held in the eigenbasis so that many directions can share one
/// decomposition.
///
/// In the eigenbasis of `H` the derivative in direction `E` is the Hadamard
/// product of `V†EV` with the divided-difference matrix
/// `K[i][j] = (exp λ_i − exp λ_j)/(λ_i − λ_j)`, which equals
/// `∫₀¹ exp((1−u)H)·E·exp(uH) du`.
#[derive(Clone, Debug)]
pub struct ExpFrechet {
    eig: EigDecomposition,
    kernel: DMatrix<f64>,
    shift: f64,
}

impl ExpFrechet {
    /// Kernel for `exp(H)`; rejects spectra above the overflow limit.
    pub fn new(h: &HermitianMatrix) -> Result<Self> {
        let eig = eigh(h)?;
        if eig.max_eigenvalue() > EXP_OVERFLOW_LIMIT {
            return Err(Error::ExpOverflow(eig.max_eigenvalue()));
        }
        Ok(Self::from_eig(eig, 0.0))
    }

    /// Kernel for `exp(H − λ_max·I)`, which never overflows.
    pub fn shifted(h: &HermitianMatrix) -> Result<Self> {
        let eig = eigh(h)?;
        let top = eig.max_eigenvalue();
        Ok(Self::from_eig(eig, top))
    }

    pub fn from_eig(eig: EigDecomposition, shift: f64) -> Self {
        let lam: Vec<f64> = eig.eigenvalues.iter().map(|l| l - shift).collect();
        let n = lam.len();
        let kernel = DMatrix::from_fn(n, n, |i, j| divided_difference_exp(lam[i], lam[j]));
        Self { eig, kernel, shift }
    }

    pub fn eig(&self) -> &EigDecomposition {
        &self.eig
    }

    /// Divided-difference matrix in the eigenbasis.
    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    /// The shift `c` such that this kernel differentiates `exp(H − c·I)`.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Directional derivative in direction `e`, in the original basis.
    pub fn apply(&self, e: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.eig.eigenvectors.check_same_dim(e)?;
        let mut inner = self.eig.to_eigenbasis(e);
        inner.zip_apply(&self.kernel, |x, k| *x *= k);
        Ok(HermitianMatrix::symmetrize(self.eig.from_eigenbasis(&inner)))
    }
}

fn divided_difference_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let gap = hi - lo;
    if gap < DIVIDED_DIFFERENCE_SWITCH {
        a.exp()
    } else {
        // (e^hi − e^lo)/gap = e^hi·(1 − e^{−gap})/gap
        hi.exp() * (-(-gap).exp_m1()) / gap
    }
}

/// `d/ds exp(H + sE)` at `s = 0`.
pub fn expm_directional_derivative(
    h: &HermitianMatrix,
    e: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    h.check_same_dim(e)?;
    ExpFrechet::new(h)?.apply(e)
}
