//! Random strictly feasible marginal problems: the marginals of a thermal
//! state `exp(−βH)/Z` of a random Hamiltonian with one term per subset.

use crate::error::{Error, Result};
use crate::linalg::{eigh, embed_operator, log_sum_exp, partial_trace, DensityMatrix, HermitianMatrix, MAX_QUBITS};
use crate::problem::{MarginalConstraint, MarginalProblem};
use crate::random::{random_hermitian, seeded};

#[derive(Clone, Debug)]
pub struct Generated {
    pub problem: MarginalProblem,
    /// The global state the marginals were taken from.
    pub state: DensityMatrix,
    pub hamiltonian: HermitianMatrix,
}

/// Each local term is a Gaussian Hermitian matrix on its subset with
/// spectral radius drawn from `[0.2, 1]`. For finite `beta` the global state
/// is full rank, so the emitted marginals are always consistent.
pub fn generate(n: usize, subsets: &[Vec<usize>], beta: f64, seed: u64) -> Result<Generated> {
    if n > MAX_QUBITS {
        return Err(Error::QubitCap { n, cap: MAX_QUBITS });
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidOptions(format!("beta must be finite and nonnegative, got {beta}")));
    }
    if subsets.is_empty() {
        return Err(Error::EmptyProblem);
    }
    let mut rng = seeded(seed);
    let mut h = HermitianMatrix::zeros(1 << n);
    for c in subsets {
        crate::linalg::check_subset(c, n, false)?;
        let local = random_hermitian(1 << c.len(), 1.0, &mut rng);
        let placed = HermitianMatrix::new(embed_operator(&local, c, n)?)?;
        h = &h + &placed;
    }
    let eig = eigh(&h)?;
    let energies: Vec<f64> = eig.eigenvalues.iter().map(|l| -beta * l).collect();
    let log_z = log_sum_exp(&energies);
    let weights: Vec<f64> = energies.iter().map(|e| (e - log_z).exp()).collect();
    let state = DensityMatrix::new(eig.with_weights(&weights))?;
    let constraints = subsets
        .iter()
        .map(|c| {
            Ok(MarginalConstraint {
                qubits: c.clone(),
                rho: partial_trace(&state, n, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Generated {
        problem: MarginalProblem::new(n, constraints)?,
        state,
        hamiltonian: h,
    })
}

/// Parses `"0,1;1,2"` into `[[0, 1], [1, 2]]`.
pub fn parse_subsets(text: &str) -> std::result::Result<Vec<Vec<usize>>, String> {
    text.split(';')
        .map(|part| {
            part.split(',')
                .map(|q| q.trim().parse::<usize>().map_err(|e| format!("bad qubit index {q:?}: {e}")))
                .collect()
        })
        .collect()
}

/// Windows `{i, …, i+k−1}` sliding by one across `n` qubits.
pub fn chain_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let k = k.min(n);
    (0..=n - k).map(|i| (i..i + k).collect()).collect()
}
