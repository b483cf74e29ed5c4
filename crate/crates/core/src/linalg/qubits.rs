use nalgebra::DMatrix;

use super::{ComplexMatrix, DensityMatrix, HermitianMatrix, C64, MAX_QUBITS};
use crate::error::{Error, Result};

/// Number of qubits for a power-of-two dimension.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::QubitCap { n, cap: MAX_QUBITS });
    }
    Ok(n)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.as_matrix().kronecker(b.as_matrix()))
}

/// Checks that `subset` is strictly ascending and inside `0..n`.
pub(crate) fn check_subset(subset: &[usize], n: usize, allow_empty: bool) -> Result<()> {
    if subset.is_empty() && !allow_empty {
        return Err(Error::InvalidSubset(subset.to_vec()));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSubset(subset.to_vec()));
    }
    if let Some(&bad) = subset.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { index: bad, n });
    }
    Ok(())
}

/// Full-register basis-index bits contributed by each local index over
/// `qubits` (big-endian within the subset).
fn scatter_table(qubits: &[usize], n: usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|local| {
            qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
                if (local >> (k - 1 - pos)) & 1 == 1 {
                    acc | 1 << (n - 1 - q)
                } else {
                    acc
                }
            })
        })
        .collect()
}

fn complement(keep: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|q| !keep.contains(q)).collect()
}

/// Partial trace of an arbitrary `2^n`-dimensional operator onto `keep`.
pub fn partial_trace_matrix(m: &ComplexMatrix, n: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    let dim = m.dim();
    if qubit_count(dim)? != n {
        return Err(Error::DimensionMismatch(dim, 1 << n));
    }
    check_subset(keep, n, true)?;
    let kept = scatter_table(keep, n);
    let traced = scatter_table(&complement(keep, n), n);
    let src = m.as_matrix();
    let out = DMatrix::from_fn(kept.len(), kept.len(), |a, b| {
        traced
            .iter()
            .map(|&t| src[(kept[a] | t, kept[b] | t)])
            .sum::<C64>()
    });
    Ok(ComplexMatrix(out))
}

/// Reduced density matrix on the sorted qubit set `keep`.
pub fn partial_trace(rho: &DensityMatrix, n: usize, keep: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(rho, n, keep)?;
    Ok(DensityMatrix::from_hermitian_unchecked(
        HermitianMatrix::symmetrize(reduced),
    ))
}

/// `M ⊗ I` with `M`'s local qubits placed on `subset` of an `n`-qubit register.
pub fn embed_operator(m: &ComplexMatrix, subset: &[usize], n: usize) -> Result<ComplexMatrix> {
    check_subset(subset, n, true)?;
    if m.dim() != 1 << subset.len() {
        return Err(Error::DimensionMismatch(m.dim(), 1 << subset.len()));
    }
    if n > MAX_QUBITS {
        return Err(Error::QubitCap { n, cap: MAX_QUBITS });
    }
    let kept = scatter_table(subset, n);
    let traced = scatter_table(&complement(subset, n), n);
    let src = m.as_matrix();
    let mut out = DMatrix::zeros(1 << n, 1 << n);
    for &t in &traced {
        for (a, &ka) in kept.iter().enumerate() {
            for (b, &kb) in kept.iter().enumerate() {
                out[(ka | t, kb | t)] = src[(a, b)];
            }
        }
    }
    Ok(ComplexMatrix(out))
}
