//! Observables `T = O + c·I`, where `O` is a Pauli string or a dense
//! Hermitian matrix and `c` is a scalar offset. Offsets carry the translation
//! `T ↦ T − t·I` symbolically, so Pauli observables never need to be
//! materialized.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, ComplexMatrix, HermitianMatrix, C64};
use crate::pauli::PauliString;

#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Pauli(PauliString),
    Matrix(HermitianMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub operator: Operator,
    pub offset: f64,
}

impl Observable {
    pub fn pauli(p: PauliString) -> Self {
        Self {
            operator: Operator::Pauli(p),
            offset: 0.0,
        }
    }

    pub fn matrix(h: HermitianMatrix) -> Self {
        Self {
            operator: Operator::Matrix(h),
            offset: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.operator {
            Operator::Pauli(p) => 1 << p.num_qubits(),
            Operator::Matrix(h) => h.dim(),
        }
    }

    pub fn as_pauli(&self) -> Option<&PauliString> {
        match &self.operator {
            Operator::Pauli(p) => Some(p),
            Operator::Matrix(_) => None,
        }
    }

    /// `T − by·I`.
    pub fn translated(&self, by: f64) -> Self {
        Self {
            operator: self.operator.clone(),
            offset: self.offset - by,
        }
    }

    /// `T + by·I`.
    pub fn shifted(&self, by: f64) -> Self {
        self.translated(-by)
    }

    pub fn to_matrix(&self) -> Result<HermitianMatrix> {
        let base = match &self.operator {
            Operator::Pauli(p) => p.materialize()?,
            Operator::Matrix(h) => h.clone(),
        };
        Ok(if self.offset == 0.0 {
            base
        } else {
            base.shift(self.offset)
        })
    }

    /// `Tr(T·ρ)`.
    pub fn expectation(&self, rho: &ComplexMatrix) -> f64 {
        match &self.operator {
            Operator::Pauli(p) => p.shifted_expectation(self.offset, rho),
            Operator::Matrix(h) => {
                assert_eq!(h.dim(), rho.dim(), "observable dimension mismatch");
                let m = h.as_matrix();
                let r = rho.as_matrix();
                let n = h.dim();
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let mut t = m[(i, j)];
                        if i == j {
                            t.re += self.offset;
                        }
                        acc += (t * r[(j, i)]).re;
                    }
                }
                acc
            }
        }
    }

    /// `M += coeff·T`.
    pub fn accumulate(&self, coeff: f64, m: &mut DMatrix<C64>) {
        match &self.operator {
            Operator::Pauli(p) => p.accumulate(coeff, m),
            Operator::Matrix(h) => *m += h.as_matrix() * C64::new(coeff, 0.0),
        }
        if self.offset != 0.0 {
            let s = coeff * self.offset;
            for i in 0..m.nrows() {
                m[(i, i)].re += s;
            }
        }
    }

    /// Smallest and largest eigenvalue of `T`.
    pub fn spectral_bounds(&self) -> Result<(f64, f64)> {
        let (lo, hi) = match &self.operator {
            Operator::Pauli(p) if p.is_identity() => (1.0, 1.0),
            Operator::Pauli(_) => (-1.0, 1.0),
            Operator::Matrix(h) => {
                let v = eigvalsh(h)?;
                (v[0], v[v.len() - 1])
            }
        };
        Ok((lo + self.offset, hi + self.offset))
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        let (lo, hi) = self.spectral_bounds()?;
        Ok(lo.abs().max(hi.abs()))
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.operator {
            Operator::Pauli(p) if p.is_identity() => f.write_str("I")?,
            Operator::Pauli(p) => write!(f, "{p}")?,
            Operator::Matrix(h) => write!(f, "matrix[{}x{}]", h.dim(), h.dim())?,
        }
        if self.offset != 0.0 {
            write!(f, " {:+}", self.offset)?;
        }
        Ok(())
    }
}

/// Observables sharing one Hilbert-space dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSet {
    dim: usize,
    items: Vec<Observable>,
}

impl ObservableSet {
    pub fn new(dim: usize, items: Vec<Observable>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch(0, 1));
        }
        if let Some(bad) = items.iter().find(|o| o.dim() != dim) {
            return Err(Error::DimensionMismatch(bad.dim(), dim));
        }
        Ok(Self { dim, items })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Observable] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Observable> {
        self.items.iter()
    }

    pub fn get(&self, i: usize) -> &Observable {
        &self.items[i]
    }

    /// All observables are Pauli strings (offsets allowed).
    pub fn is_pauli_only(&self) -> bool {
        self.items.iter().all(|o| o.as_pauli().is_some())
    }

    /// `H(θ) = Σ θ_i·T_i`; terms with `θ_i = 0` are skipped, so trailing
    /// zero coefficients reproduce the prefix Hamiltonian bit for bit.
    pub fn hamiltonian(&self, theta: &[f64]) -> Result<HermitianMatrix> {
        if theta.len() != self.items.len() {
            return Err(Error::DimensionMismatch(theta.len(), self.items.len()));
        }
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (obs, &t) in self.items.iter().zip(theta) {
            if t != 0.0 {
                obs.accumulate(t, &mut m);
            }
        }
        Ok(HermitianMatrix::symmetrize(
            ComplexMatrix::from_matrix(m).expect("square"),
        ))
    }

    /// `Tr(T_i·ρ)` for every observable.
    pub fn expectations(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.items.iter().map(|o| o.expectation(rho)).collect()
    }
}
