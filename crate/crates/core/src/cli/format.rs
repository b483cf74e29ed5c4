//! JSON problem and result files.
//!
//! Complex entries are `[re, im]` pairs and matrices are row-major arrays of
//! rows. Qubit indices are 0-based, qubit 0 being the most significant bit of
//! a basis-state index.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::linalg::{ComplexMatrix, DensityMatrix, HermitianMatrix, C64};
use crate::observable::{Observable, ObservableSet};
use crate::pauli::PauliString;
use crate::problem::{ExpectationProblem, MarginalConstraint, MarginalProblem, Problem};
use crate::solver::{SolveOptions, SolveResult, TraceEntry, VerificationReport};

pub type Matrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginalEntry {
    pub qubits: Vec<usize>,
    pub rho: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTarget {
    pub pauli: String,
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixTarget {
    pub matrix: Matrix,
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginals: Option<Vec<MarginalEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectations: Option<Vec<PauliTarget>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<Vec<MatrixTarget>>,
}

/// Input that could not be turned into a problem, with the JSON path of the
/// offending value.
#[derive(Debug)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "at {}: {}", self.path, self.message)
        }
    }
}

fn at(path: impl Into<String>, err: impl std::fmt::Display) -> InputError {
    InputError {
        path: path.into(),
        message: err.to_string(),
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| at(e.path().to_string(), e.inner()))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Matrix {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn matrix_from_json(m: &Matrix, path: &str) -> Result<ComplexMatrix, InputError> {
    let rows: Vec<Vec<C64>> = m
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(at(path, "non-finite matrix entry"));
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| at(path, e))
}

impl ProblemFile {
    pub fn from_problem(problem: &Problem) -> Self {
        match problem {
            Problem::Marginals(mp) => Self {
                n: mp.num_qubits(),
                marginals: Some(
                    mp.constraints()
                        .iter()
                        .map(|c| MarginalEntry {
                            qubits: c.qubits.clone(),
                            rho: matrix_to_json(&c.rho),
                        })
                        .collect(),
                ),
                expectations: None,
                observables: None,
            },
            Problem::Expectations(ep) => {
                let mut paulis = Vec::new();
                let mut matrices = Vec::new();
                for (o, &t) in ep.observables().iter().zip(ep.original_targets()) {
                    match o.as_pauli() {
                        Some(p) if o.offset == 0.0 => paulis.push(PauliTarget {
                            pauli: p.to_string(),
                            target: t,
                        }),
                        _ => matrices.push(MatrixTarget {
                            matrix: matrix_to_json(&o.to_matrix().expect("within cap")),
                            target: t,
                        }),
                    }
                }
                Self {
                    n: ep.num_qubits().unwrap_or(0),
                    marginals: None,
                    expectations: (!paulis.is_empty()).then_some(paulis),
                    observables: (!matrices.is_empty()).then_some(matrices),
                }
            }
        }
    }

    /// Validates the document and builds the problem. `cap` is the qubit
    /// limit in force.
    pub fn to_problem(&self, cap: usize) -> Result<Problem, InputError> {
        if self.n > cap {
            return Err(at("n", Error::QubitCap { n: self.n, cap }));
        }
        let expectation_form = self.expectations.is_some() || self.observables.is_some();
        match (&self.marginals, expectation_form) {
            (Some(_), true) => Err(at(".", "a problem has either `marginals` or `expectations`/`observables`, not both")),
            (None, false) => Err(at(".", "missing `marginals` or `expectations`/`observables`")),
            (Some(entries), false) => self.marginal_problem(entries),
            (None, true) => self.expectation_problem(),
        }
    }

    fn marginal_problem(&self, entries: &[MarginalEntry]) -> Result<Problem, InputError> {
        let mut constraints = Vec::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            crate::linalg::check_subset(&e.qubits, self.n, false).map_err(|err| at(format!("marginals[{i}].qubits"), err))?;
            let path = format!("marginals[{i}].rho");
            let m = matrix_from_json(&e.rho, &path)?;
            if m.dim() != 1 << e.qubits.len() {
                return Err(at(path, Error::DimensionMismatch(m.dim(), 1 << e.qubits.len())));
            }
            let rho = DensityMatrix::from_complex(m).map_err(|err| at(&path, err))?;
            constraints.push(MarginalConstraint {
                qubits: e.qubits.clone(),
                rho,
            });
        }
        MarginalProblem::new(self.n, constraints)
            .map(Problem::Marginals)
            .map_err(|e| at("marginals", e))
    }

    fn expectation_problem(&self) -> Result<Problem, InputError> {
        let dim = 1usize << self.n;
        let mut items = Vec::new();
        let mut targets = Vec::new();
        for (i, e) in self.expectations.iter().flatten().enumerate() {
            let p = PauliString::parse(&e.pauli, self.n).map_err(|err| at(format!("expectations[{i}].pauli"), err))?;
            items.push(Observable::pauli(p));
            targets.push(e.target);
        }
        for (i, e) in self.observables.iter().flatten().enumerate() {
            let path = format!("observables[{i}].matrix");
            let m = matrix_from_json(&e.matrix, &path)?;
            if m.dim() != dim {
                return Err(at(path, Error::DimensionMismatch(m.dim(), dim)));
            }
            items.push(Observable::matrix(HermitianMatrix::new(m).map_err(|err| at(&path, err))?));
            targets.push(e.target);
        }
        if items.is_empty() {
            return Err(at(".", Error::EmptyProblem));
        }
        let paulis = self.expectations.as_ref().map_or(0, Vec::len);
        let obs = ObservableSet::new(dim, items).map_err(|e| at(".", e))?;
        ExpectationProblem::new(Some(self.n), obs, targets)
            .map(Problem::Expectations)
            .map_err(|e| match e {
                Error::TargetOutOfRange { index, .. } if index < paulis => at(format!("expectations[{index}].target"), e),
                Error::TargetOutOfRange { index, .. } => at(format!("observables[{}].target", index - paulis), e),
                other => at(".", other),
            })
    }
}

/// `sha256:<hex>` of the raw problem bytes.
pub fn input_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalTermEntry {
    pub qubits: Vec<usize>,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub psi: f64,
    pub grad_norm: f64,
    pub theta_norm: f64,
}

impl From<&TraceEntry> for TraceRow {
    fn from(t: &TraceEntry) -> Self {
        Self {
            psi: t.psi,
            grad_norm: t.grad_norm,
            theta_norm: t.theta_norm,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub tool: String,
    pub version: String,
    pub input_digest: String,
    pub status: String,
    pub labels: Vec<String>,
    pub theta: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub grad_tol: f64,
    pub psi: f64,
    pub entropy_bits: f64,
    pub min_eigenvalue: f64,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_terms: Option<Vec<LocalTermEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRow>>,
}

pub fn labels(problem: &Problem, result: &SolveResult) -> Vec<String> {
    match (problem, &result.strings) {
        (_, Some(strings)) => strings.iter().map(|p| p.to_string()).collect(),
        (Problem::Expectations(ep), None) => {
            let mut matrices = 0;
            ep.observables()
                .iter()
                .map(|o| match o.as_pauli() {
                    Some(p) => p.to_string(),
                    None => {
                        matrices += 1;
                        format!("observables[{}]", matrices - 1)
                    }
                })
                .collect()
        }
        (Problem::Marginals(_), None) => Vec::new(),
    }
}

impl ResultFile {
    pub fn new(
        problem: &Problem,
        result: &SolveResult,
        report: &VerificationReport,
        opts: &SolveOptions,
        digest: String,
        with_trace: bool,
    ) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: digest,
            status: format!("{:?}", result.status),
            labels: labels(problem, result),
            theta: result.theta.clone(),
            residuals: result.residuals.clone(),
            max_residual: result.max_residual(),
            grad_tol: opts.grad_tol,
            psi: result.gibbs.psi,
            entropy_bits: report.entropy_bits,
            min_eigenvalue: report.min_eigenvalue,
            iterations: result.iterations,
            local_terms: result.local_terms.as_ref().map(|terms| {
                terms
                    .iter()
                    .map(|t| LocalTermEntry {
                        qubits: t.qubits.clone(),
                        matrix: matrix_to_json(&t.matrix),
                    })
                    .collect()
            }),
            trace: with_trace.then(|| result.trace.iter().map(TraceRow::from).collect()),
        }
    }
}
