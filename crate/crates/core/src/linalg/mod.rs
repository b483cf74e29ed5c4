//! Dense complex matrices with Hermitian and density-matrix newtypes.
//!
//! Every matrix function of a Hermitian argument goes through [`eigh`]; there
//! is no Padé or Taylor path. Qubit registers use big-endian ordering: qubit 0
//! is the leftmost tensor factor, i.e. the most significant bit of a basis
//! index.

mod functions;
mod qubits;

use std::fmt;
use std::ops::{Add, Deref, Mul, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use functions::{
    eigh, eigvalsh, expm_directional_derivative, frobenius_norm, hilbert_schmidt_inner,
    log_sum_exp, log_trace_exp, matrix_exp, psd_modulus, psd_power, trace_distance,
    von_neumann_entropy, EigDecomposition, ExpFrechet,
};
pub use qubits::{embed_operator, kron, partial_trace, partial_trace_matrix, qubit_count};
pub(crate) use qubits::check_subset;

pub use nalgebra::Complex;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

/// Hard cap on register size (dimension 4096).
pub const MAX_QUBITS: usize = 12;

/// Frobenius norm of the anti-Hermitian part above which input is rejected.
pub const HERMITIAN_REJECT_TOL: f64 = 1e-8;
/// Allowed deviation of a density matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated in a density matrix.
pub const PSD_TOL: f64 = 1e-10;

pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a `dim`×`dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    /// Builds a matrix from a list of rows; every row must have the same
    /// length as the number of rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
        }
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(dim, &flat)
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c64(diag[i], 0.0)
            } else {
                C64::default()
            }
        }))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ComplexMatrix").field(&self.to_rows()).finish()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix product dimension mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix sum dimension mismatch");
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix difference dimension mismatch");
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Hermitian matrix, stored exactly Hermitian after symmetrization.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Symmetrizes `(A + A†)/2`, rejecting inputs whose anti-Hermitian part
    /// exceeds [`HERMITIAN_REJECT_TOL`] in Frobenius norm.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let adj = m.0.adjoint();
        let anti = (&m.0 - &adj).norm() * 0.5;
        if !anti.is_finite() || anti > HERMITIAN_REJECT_TOL {
            return Err(Error::NotHermitian(anti));
        }
        Ok(Self::symmetrize(m))
    }

    /// Projects onto the Hermitian part without any rejection gate.
    pub(crate) fn symmetrize(m: ComplexMatrix) -> Self {
        let adj = m.0.adjoint();
        Self(ComplexMatrix((m.0 + adj) * c64(0.5, 0.0)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_complex(self) -> ComplexMatrix {
        self.0
    }

    /// Real trace.
    pub fn trace_re(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(c64(s, 0.0)))
    }

    /// `self + s·I`.
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.0 .0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += s;
        }
        Self(ComplexMatrix(m))
    }

    /// Real part of `Tr(self · other)`; exact for Hermitian pairs.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        let a = &self.0 .0;
        let b = &other.0 .0;
        assert_eq!(a.nrows(), b.nrows(), "trace product dimension mismatch");
        let n = a.nrows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = a[(i, j)] * b[(j, i)];
                acc += x.re;
            }
        }
        acc
    }
}

impl Deref for HermitianMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    /// Validates trace and positivity within [`TRACE_TOL`] and [`PSD_TOL`].
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let tr = h.trace_re();
        if !tr.is_finite() || (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min = eigvalsh(&h)?[0];
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self(h))
    }

    pub fn from_complex(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub(crate) fn from_hermitian_unchecked(h: HermitianMatrix) -> Self {
        Self(h)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Projector onto a (not necessarily normalized) state vector.
    pub fn pure(state: &[C64]) -> Result<Self> {
        let norm2: f64 = state.iter().map(|z| z.norm_sqr()).sum();
        if state.is_empty() || norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidTrace(norm2));
        }
        let n = state.len();
        let m = DMatrix::from_fn(n, n, |i, j| state[i] * state[j].conj() / norm2);
        Ok(Self(HermitianMatrix::symmetrize(ComplexMatrix(m))))
    }

    /// Computational basis projector `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut diag = vec![0.0; dim];
        diag[k] = 1.0;
        Self(HermitianMatrix::from_real_diagonal(&diag))
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self(HermitianMatrix::symmetrize(kron(self, other)))
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }
}

impl Deref for DensityMatrix {
    type Target = HermitianMatrix;

    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_gate_symmetrizes_roundoff_and_rejects_user_error() {
        let m = ComplexMatrix::from_row_major(
            2,
            &[c64(1.0, 0.0), c64(0.5, 1e-12), c64(0.5, -1e-12 + 1e-13), c64(2.0, 0.0)],
        )
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0).conj());

        let bad = ComplexMatrix::from_row_major(
            2,
            &[c64(1.0, 0.0), c64(0.5, 0.0), c64(0.0, 0.0), c64(2.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(HermitianMatrix::new(bad), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn density_matrix_checks() {
        assert!(matches!(
            DensityMatrix::new(HermitianMatrix::identity(2)),
            Err(Error::InvalidTrace(_))
        ));
        let neg = HermitianMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotPsd(_))));
        let ok = DensityMatrix::new(HermitianMatrix::from_real_diagonal(&[0.25, 0.75])).unwrap();
        assert!((ok.trace_re() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, &[C64::default(); 3]),
            Err(Error::EntryCount { expected: 4, got: 3 })
        ));
        assert!(ComplexMatrix::from_rows(&[vec![C64::default(); 2]]).is_err());
        assert!(ComplexMatrix::from_row_major(0, &[]).is_err());
    }
}
