use thiserror::Error;

use crate::problem::CompatibilityReport;

/// Errors raised by the numerical kernels, problem reductions and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("matrix is not Hermitian (anti-Hermitian part has Frobenius norm {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("eigendecomposition of a {dim}x{dim} matrix failed to converge (max off-diagonal {residual:.3e})")]
    EigenConvergence { dim: usize, residual: f64 },

    #[error("matrix exponential overflows: largest eigenvalue {0} exceeds 700")]
    ExpOverflow(f64),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("qubit subset {0:?} must be nonempty, sorted and free of duplicates")]
    InvalidSubset(Vec<usize>),

    #[error("{n} qubits exceeds the cap of {cap}")]
    QubitCap { n: usize, cap: usize },

    #[error("invalid Pauli string {0:?}")]
    PauliParse(String),

    #[error("Pauli string {string} is not supported on qubits {subset:?}")]
    Unsupported { string: String, subset: Vec<usize> },

    #[error("identity target must equal 1, got {0}")]
    IdentityTarget(f64),

    #[error("coefficient of {string} has imaginary part {imag:.3e}")]
    ComplexCoefficient { string: String, imag: f64 },

    #[error("target {target} for observable {index} exceeds its spectral radius {radius}")]
    TargetOutOfRange { index: usize, target: f64, radius: f64 },

    #[error(
        "conflicting targets for {string}: {first} from qubits {first_subset:?}, {second} from qubits {second_subset:?}"
    )]
    TargetConflict {
        string: String,
        first: f64,
        first_subset: Vec<usize>,
        second: f64,
        second_subset: Vec<usize>,
    },

    #[error("observables together with the identity are linearly dependent (Gram eigenvalue ratio {ratio:.3e})")]
    DependentObservables { ratio: f64 },

    #[error("marginals are locally incompatible (max overlap trace distance {:.3e})", .0.max_distance())]
    LocallyIncompatible(Box<CompatibilityReport>),

    #[error("Pauli string {0} is supported on none of the given subsets")]
    OrphanString(String),

    #[error("problem has no constraints")]
    EmptyProblem,

    #[error("invalid solver option: {0}")]
    InvalidOptions(String),
}

pub type Result<T> = std::result::Result<T, Error>;
