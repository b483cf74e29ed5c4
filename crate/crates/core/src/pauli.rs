//! Symbolic Pauli strings and Hilbert–Schmidt expansions in the Pauli basis.
//!
//! A [`PauliString`] on `n` qubits stores only its non-identity letters, so
//! strings coming from different (overlapping) qubit subsets deduplicate
//! exactly. Matrices are produced on demand. Every string is a signed
//! permutation matrix: row `r` has its single nonzero entry in column
//! `r ^ flip_mask`, which is what the fast expectation and accumulation paths
//! below exploit.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{c64, qubit_count, ComplexMatrix, DensityMatrix, HermitianMatrix, C64, MAX_QUBITS, PSD_TOL};

/// Coefficients smaller than this are dropped from expansions.
pub const COEFFICIENT_DROP: f64 = 1e-14;
/// Largest imaginary part tolerated in an extracted coefficient.
pub const IMAGINARY_TOL: f64 = 1e-10;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis with identity off its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    letters: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            letters: BTreeMap::new(),
        }
    }

    pub fn new(n: usize, letters: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, p) in letters {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            if map.insert(q, p).is_some() {
                return Err(Error::PauliParse(format!("qubit {q} appears twice")));
            }
        }
        Ok(Self { n, letters: map })
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Result<Self> {
        Self::new(n, [(qubit, p)])
    }

    /// Parses the canonical text form, e.g. `"X0 Z2"`; the empty string is
    /// the identity.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let mut chars = token.chars();
            let p = match chars.next() {
                Some('X') => Some(Pauli::X),
                Some('Y') => Some(Pauli::Y),
                Some('Z') => Some(Pauli::Z),
                Some('I') => None,
                _ => return Err(Error::PauliParse(text.to_string())),
            };
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::PauliParse(text.to_string()))?;
            if let Some(p) = p {
                letters.push((q, p));
            } else if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        Self::new(n, letters)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &BTreeMap<usize, Pauli> {
        &self.letters
    }

    pub fn support(&self) -> Vec<usize> {
        self.letters.keys().copied().collect()
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_supported_on(&self, subset: &[usize]) -> bool {
        self.letters.keys().all(|q| subset.contains(q))
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// Columns are `row ^ flip_mask`.
    fn flip_mask(&self) -> usize {
        self.letters
            .iter()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .fold(0, |acc, (&q, _)| acc | self.bit(q))
    }

    /// Rows whose bit is set on these qubits pick up a sign.
    fn sign_mask(&self) -> usize {
        self.letters
            .iter()
            .filter(|(_, p)| matches!(p, Pauli::Y | Pauli::Z))
            .fold(0, |acc, (&q, _)| acc | self.bit(q))
    }

    /// `(−i)^{#Y}`.
    fn base_phase(&self) -> C64 {
        let ny = self.letters.values().filter(|&&p| p == Pauli::Y).count();
        match ny % 4 {
            0 => c64(1.0, 0.0),
            1 => c64(0.0, -1.0),
            2 => c64(-1.0, 0.0),
            _ => c64(0.0, 1.0),
        }
    }

    /// Column index and value of the single nonzero entry in every row.
    fn rows(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let flip = self.flip_mask();
        let sign = self.sign_mask();
        let phase = self.base_phase();
        (0..1usize << self.n).map(move |r| {
            let v = if (r & sign).count_ones() % 2 == 1 { -phase } else { phase };
            (r, r ^ flip, v)
        })
    }

    fn check_cap(&self) -> Result<()> {
        if self.n > MAX_QUBITS {
            return Err(Error::QubitCap {
                n: self.n,
                cap: MAX_QUBITS,
            });
        }
        Ok(())
    }

    /// Dense `2^n` matrix.
    pub fn materialize(&self) -> Result<HermitianMatrix> {
        self.check_cap()?;
        let dim = 1 << self.n;
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (r, c, v) in self.rows() {
            m[(r, c)] = v;
        }
        Ok(HermitianMatrix::symmetrize(
            ComplexMatrix::from_matrix(m).expect("square"),
        ))
    }

    /// `Tr(P·ρ)` in `O(2^n)`; the real part, which is exact for Hermitian ρ.
    pub fn expectation(&self, rho: &ComplexMatrix) -> f64 {
        self.expectation_complex(rho).re
    }

    fn expectation_complex(&self, rho: &ComplexMatrix) -> C64 {
        assert_eq!(rho.dim(), 1 << self.n, "Pauli expectation dimension mismatch");
        let m = rho.as_matrix();
        self.rows().map(|(r, c, v)| v * m[(c, r)]).sum()
    }

    /// `Tr((P + offset·I)·ρ)` summed entrywise, so diagonal strings with an
    /// offset do not suffer cancellation between the two parts.
    pub fn shifted_expectation(&self, offset: f64, rho: &ComplexMatrix) -> f64 {
        assert_eq!(rho.dim(), 1 << self.n, "Pauli expectation dimension mismatch");
        let m = rho.as_matrix();
        if self.flip_mask() == 0 {
            self.rows().map(|(r, _, v)| (v.re + offset) * m[(r, r)].re).sum()
        } else {
            self.expectation(rho) + offset * rho.trace().re
        }
    }

    /// `M += coeff·P`.
    pub fn accumulate(&self, coeff: f64, m: &mut DMatrix<C64>) {
        assert_eq!(m.nrows(), 1 << self.n, "Pauli accumulation dimension mismatch");
        for (r, c, v) in self.rows() {
            m[(r, c)] += v * coeff;
        }
    }

    /// Places a string on `subset.len()` local qubits onto `subset` of an
    /// `n`-qubit register (`P ⊗ I`).
    pub fn embed(&self, subset: &[usize], n: usize) -> Result<PauliString> {
        crate::linalg::check_subset(subset, n, true)?;
        if subset.len() != self.n {
            return Err(Error::DimensionMismatch(self.n, subset.len()));
        }
        Self::new(n, self.letters.iter().map(|(&q, &p)| (subset[q], p)))
    }

    /// Inverse of [`embed`](Self::embed): re-indexes onto the local qubits of
    /// `subset`. Fails if the support leaves the subset.
    pub fn restrict(&self, subset: &[usize]) -> Result<PauliString> {
        let mut letters = Vec::with_capacity(self.letters.len());
        for (&q, &p) in &self.letters {
            let local = subset.iter().position(|&s| s == q).ok_or_else(|| Error::Unsupported {
                string: self.to_string(),
                subset: subset.to_vec(),
            })?;
            letters.push((local, p));
        }
        Self::new(subset.len(), letters)
    }

    /// All `4^k` strings on `k` qubits, identity first, in a fixed order.
    pub fn all(k: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * k)).map(move |code| {
            let letters = (0..k).filter_map(|q| {
                let digit = (code >> (2 * (k - 1 - q))) & 3;
                match digit {
                    0 => None,
                    1 => Some((q, Pauli::X)),
                    2 => Some((q, Pauli::Y)),
                    _ => Some((q, Pauli::Z)),
                }
            });
            PauliString::new(k, letters).expect("indices in range")
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (q, p) in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", p.letter(), q)?;
            first = false;
        }
        Ok(())
    }
}

/// Real coefficients `α_P` with `A = Σ α_P·P`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliExpansion {
    pub n: usize,
    pub coefficients: BTreeMap<PauliString, f64>,
}

impl PauliExpansion {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.coefficients.get(p).copied().unwrap_or(0.0)
    }
}

/// `α_P = Tr(P·A)/2^k` for every string on `k` qubits.
pub fn expand(a: &HermitianMatrix) -> Result<PauliExpansion> {
    let k = qubit_count(a.dim())?;
    let norm = 1.0 / a.dim() as f64;
    let mut coefficients = BTreeMap::new();
    for p in PauliString::all(k) {
        let z = p.expectation_complex(a) * norm;
        if z.im.abs() > IMAGINARY_TOL {
            return Err(Error::ComplexCoefficient {
                string: p.to_string(),
                imag: z.im,
            });
        }
        if z.re.abs() >= COEFFICIENT_DROP {
            coefficients.insert(p, z.re);
        }
    }
    Ok(PauliExpansion { n: k, coefficients })
}

/// `Σ α_P·P`.
pub fn reconstruct(e: &PauliExpansion) -> Result<HermitianMatrix> {
    if e.n > MAX_QUBITS {
        return Err(Error::QubitCap { n: e.n, cap: MAX_QUBITS });
    }
    let dim = 1 << e.n;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (p, &alpha) in &e.coefficients {
        if p.num_qubits() != e.n {
            return Err(Error::DimensionMismatch(p.num_qubits(), e.n));
        }
        p.accumulate(alpha, &mut m);
    }
    Ok(HermitianMatrix::symmetrize(
        ComplexMatrix::from_matrix(m).expect("square"),
    ))
}

/// Local operator rebuilt from expectation values of strings on a subset.
#[derive(Clone, Debug)]
pub struct ReconstructedMarginal {
    pub matrix: HermitianMatrix,
    pub min_eigenvalue: f64,
    /// Whether the matrix is positive semidefinite within tolerance; false
    /// means the targets are not realizable by any state.
    pub is_psd: bool,
}

impl ReconstructedMarginal {
    pub fn into_density(self) -> Result<DensityMatrix> {
        if !self.is_psd {
            return Err(Error::NotPsd(self.min_eigenvalue));
        }
        DensityMatrix::new(self.matrix)
    }
}

/// Builds `ρ = Σ_P (t_P/2^k)·P` on the qubits of `subset` from targets
/// `t_P = Tr(P·ρ)`, with the identity coefficient fixed to 1. Strings are
/// given in register coordinates and must be supported on `subset`.
pub fn marginal_from_expectations(
    subset: &[usize],
    targets: &BTreeMap<PauliString, f64>,
) -> Result<ReconstructedMarginal> {
    let k = subset.len();
    if k > MAX_QUBITS {
        return Err(Error::QubitCap { n: k, cap: MAX_QUBITS });
    }
    let dim = 1 << k;
    let norm = 1.0 / dim as f64;
    let mut m = DMatrix::<C64>::identity(dim, dim) * c64(norm, 0.0);
    for (p, &t) in targets {
        if p.is_identity() {
            if (t - 1.0).abs() > 1e-12 {
                return Err(Error::IdentityTarget(t));
            }
            continue;
        }
        p.restrict(subset)?.accumulate(t * norm, &mut m);
    }
    let matrix = HermitianMatrix::symmetrize(ComplexMatrix::from_matrix(m).expect("square"));
    let min_eigenvalue = crate::linalg::eigvalsh(&matrix)?[0];
    Ok(ReconstructedMarginal {
        matrix,
        min_eigenvalue,
        is_psd: min_eigenvalue >= -PSD_TOL,
    })
}
