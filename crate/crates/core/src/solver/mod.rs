//! Fitting Gibbs states to constraints.
//!
//! After translating every target to zero, the parameters `θ*` of the
//! matching Gibbs state are the minimizer of the convex function
//! `ψ′(θ) = log Tr exp(Σ θ_i·(T_i − t_i·I))`, whose gradient is the residual
//! vector `⟨T_i⟩ − t_i`. The minimizer is found by L-BFGS from `θ = 0`, with
//! an optional Newton polish near the optimum.
//!
//! A small gradient alone does not certify a solution: along a ray towards a
//! boundary state the gradient decays exponentially while no finite
//! minimizer exists. A point is only reported as converged when, in
//! addition, the Newton step `−∇²ψ′⁻¹∇ψ′` is negligible. Instances without a
//! finite minimizer run until `‖θ‖∞` passes the cap and are reported as
//! [`Status::BoundaryOrInfeasible`].

pub mod lbfgs;

use nalgebra::{Cholesky, DMatrix};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    embed_operator, partial_trace, trace_distance, von_neumann_entropy, ComplexMatrix, HermitianMatrix, C64,
};
use crate::observable::ObservableSet;
use crate::partition::{gibbs_state, GibbsState};
use crate::pauli::PauliString;
use crate::problem::{
    check_independence, check_local_compatibility, reduce_to_expectations, translate_to_zero,
    ExpectationProblem, MarginalProblem, Problem, Verdict,
};
use crate::random::{random_unit_vector, seeded};
use lbfgs::{armijo, dot, inf_norm, Evaluation, LineSearch, Memory};

/// Gradient norm below which Newton polishing starts.
pub const REFINE_THRESHOLD: f64 = 1e-3;
/// A Newton step of at most this size times `max(1, ‖θ‖∞)` certifies
/// stationarity.
pub const NEWTON_CERTIFICATE: f64 = 1e-4;
/// Largest `r·dim³` for which Hessians are formed. Above it the solver is
/// purely first-order and convergence rests on the gradient test alone.
pub const HESSIAN_BUDGET: f64 = 4e9;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Convergence threshold on `max_i |⟨T_i⟩ − t_i|`.
    pub grad_tol: f64,
    pub max_iter: usize,
    /// Divergence sentinel on `‖θ‖∞`.
    pub theta_cap: f64,
    /// Seeds the random start when `start_radius > 0`.
    pub seed: u64,
    /// Radius of the ball the start point is drawn from; 0 starts at `θ = 0`.
    pub start_radius: f64,
    pub refine: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-8,
            max_iter: 5000,
            theta_cap: 50.0,
            seed: 0,
            start_radius: 0.0,
            refine: true,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidOptions(format!("gradient tolerance must be positive, got {}", self.grad_tol)));
        }
        if !(self.theta_cap > 1.0) {
            return Err(Error::InvalidOptions(format!("theta cap must exceed 1, got {}", self.theta_cap)));
        }
        if !(self.start_radius >= 0.0) || !self.start_radius.is_finite() {
            return Err(Error::InvalidOptions(format!("start radius must be finite and nonnegative, got {}", self.start_radius)));
        }
        Ok(())
    }

    fn start(&self, r: usize) -> Vec<f64> {
        if self.start_radius == 0.0 || r == 0 {
            return vec![0.0; r];
        }
        let mut rng = seeded(self.seed);
        let dir = random_unit_vector(r, &mut rng);
        let radius = self.start_radius * rng.random_range(0.0..=1.0);
        dir.into_iter().map(|x| x * radius).collect()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Converged,
    BoundaryOrInfeasible,
    IterationLimit,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub psi: f64,
    pub grad_norm: f64,
    pub theta_norm: f64,
}

/// `M_i` acting on the qubits of one subset.
#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub qubits: Vec<usize>,
    pub matrix: HermitianMatrix,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: Status,
    pub theta: Vec<f64>,
    /// State at the final `θ` built from the untranslated observables.
    pub gibbs: GibbsState,
    /// `|⟨T_i⟩ − t_i|`.
    pub residuals: Vec<f64>,
    /// `ψ′` at the final point.
    pub objective: f64,
    /// One entry per iteration, the final point included.
    pub trace: Vec<TraceEntry>,
    pub iterations: usize,
    pub evaluations: usize,
    /// `‖Δθ‖∞` of the last Newton step computed, if any.
    pub newton_step: Option<f64>,
    /// Observable strings for marginal problems, in constraint order.
    pub strings: Option<Vec<PauliString>>,
    pub local_terms: Option<Vec<LocalTerm>>,
}

impl SolveResult {
    pub fn max_residual(&self) -> f64 {
        inf_norm(&self.residuals)
    }
}

struct Minimization {
    status: Status,
    theta: Vec<f64>,
    objective: f64,
    gradient: Vec<f64>,
    trace: Vec<TraceEntry>,
    iterations: usize,
    evaluations: usize,
    newton_step: Option<f64>,
}

fn evaluate(theta: &[f64], obs: &ObservableSet) -> Result<Evaluation<GibbsState>> {
    let state = gibbs_state(theta, obs)?;
    Ok(Evaluation {
        value: state.psi,
        gradient: state.expectations.clone(),
        extra: state,
    })
}

fn newton_step(state: &GibbsState, obs: &ObservableSet, gradient: &[f64]) -> Result<Option<Vec<f64>>> {
    let h = state.hessian(obs)?;
    let Some(chol) = Cholesky::new(h) else {
        return Ok(None);
    };
    let g = DMatrix::from_column_slice(gradient.len(), 1, gradient);
    let step = chol.solve(&g);
    let step: Vec<f64> = step.iter().map(|x| -x).collect();
    Ok(step.iter().all(|x| x.is_finite()).then_some(step))
}

/// Minimizes `ψ` over the given (already translated) observables.
fn minimize(obs: &ObservableSet, opts: &SolveOptions) -> Result<Minimization> {
    let r = obs.len();
    let hessian_ok = (r as f64) * (obs.dim() as f64).powi(3) <= HESSIAN_BUDGET;
    let mut x = opts.start(r);
    let mut evaluations = 1;
    let mut cur = evaluate(&x, obs)?;
    let mut memory = Memory::default();
    let mut trace = Vec::new();
    let mut newton_norm = None;
    let mut iterations = 0;
    let status = loop {
        let g_norm = inf_norm(&cur.gradient);
        let x_norm = inf_norm(&x);
        trace.push(TraceEntry {
            psi: cur.value,
            grad_norm: g_norm,
            theta_norm: x_norm,
        });

        let want_newton = hessian_ok && (g_norm <= opts.grad_tol || (opts.refine && g_norm < REFINE_THRESHOLD));
        let newton = if want_newton {
            newton_step(&cur.extra, obs, &cur.gradient)?
        } else {
            None
        };
        if let Some(step) = &newton {
            newton_norm = Some(inf_norm(step));
        }
        if g_norm <= opts.grad_tol {
            let certified = match &newton {
                _ if !hessian_ok => true,
                Some(step) => inf_norm(step) <= NEWTON_CERTIFICATE * x_norm.max(1.0),
                None => false,
            };
            if certified {
                break Status::Converged;
            }
        }
        if x_norm > opts.theta_cap {
            break Status::BoundaryOrInfeasible;
        }
        if iterations >= opts.max_iter {
            break Status::IterationLimit;
        }
        iterations += 1;

        let mut direction = match newton {
            Some(step) if opts.refine || g_norm <= opts.grad_tol => step,
            _ => memory.direction(&cur.gradient),
        };
        if !(dot(&direction, &cur.gradient) < 0.0) {
            memory.clear();
            direction = cur.gradient.iter().map(|g| -g).collect();
        }
        let mut search = armijo(&x, &cur, &direction, |p| {
            evaluations += 1;
            evaluate(p, obs)
        })?;
        if matches!(search, LineSearch::Failed) && !memory.is_empty() {
            memory.clear();
            direction = cur.gradient.iter().map(|g| -g).collect();
            search = armijo(&x, &cur, &direction, |p| {
                evaluations += 1;
                evaluate(p, obs)
            })?;
        }
        let LineSearch::Accepted { point, eval, .. } = search else {
            // No decrease is representable along −∇ψ′: the iteration has
            // stalled without meeting the convergence test.
            break Status::IterationLimit;
        };
        let s: Vec<f64> = point.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = eval.gradient.iter().zip(&cur.gradient).map(|(a, b)| a - b).collect();
        memory.push(s, y);
        x = point;
        cur = eval;
    };
    Ok(Minimization {
        status,
        theta: x,
        objective: cur.value,
        gradient: cur.gradient,
        trace,
        iterations,
        evaluations,
        newton_step: newton_norm,
    })
}

/// Gibbs state matching the expectation values of `ep`.
pub fn solve_expectations(ep: &ExpectationProblem, opts: &SolveOptions) -> Result<SolveResult> {
    opts.validate()?;
    let independence = check_independence(ep)?;
    if !independence.independent {
        return Err(Error::DependentObservables {
            ratio: independence.ratio(),
        });
    }
    let translated = translate_to_zero(ep);
    let m = minimize(translated.observables(), opts)?;
    let gibbs = gibbs_state(&m.theta, ep.observables())?;
    Ok(SolveResult {
        status: m.status,
        residuals: m.gradient.iter().map(|g| g.abs()).collect(),
        theta: m.theta,
        gibbs,
        objective: m.objective,
        trace: m.trace,
        iterations: m.iterations,
        evaluations: m.evaluations,
        newton_step: m.newton_step,
        strings: None,
        local_terms: None,
    })
}

/// Reduces the marginals to Pauli expectation values, fits them and splits
/// the fitted Hamiltonian into one term per subset.
pub fn solve_marginals(mp: &MarginalProblem, opts: &SolveOptions) -> Result<SolveResult> {
    opts.validate()?;
    let report = check_local_compatibility(mp)?;
    if report.verdict != Verdict::Compatible {
        return Err(Error::LocallyIncompatible(Box::new(report)));
    }
    let reduction = reduce_to_expectations(mp)?;
    let mut result = solve_expectations(&reduction.problem, opts)?;
    result.local_terms = Some(decompose_local_terms(&result.theta, &reduction.strings, &mp.subsets())?);
    result.strings = Some(reduction.strings);
    Ok(result)
}

pub fn solve(problem: &Problem, opts: &SolveOptions) -> Result<SolveResult> {
    match problem {
        Problem::Marginals(mp) => solve_marginals(mp, opts),
        Problem::Expectations(ep) => solve_expectations(ep, opts),
    }
}

/// Assigns each term `θ_a·P_a` to the lowest-index subset containing its
/// support and sums the terms of each subset on its local qubits.
pub fn decompose_local_terms(
    theta: &[f64],
    strings: &[PauliString],
    subsets: &[Vec<usize>],
) -> Result<Vec<LocalTerm>> {
    if theta.len() != strings.len() {
        return Err(Error::DimensionMismatch(theta.len(), strings.len()));
    }
    let mut sums: Vec<DMatrix<C64>> = subsets
        .iter()
        .map(|c| DMatrix::zeros(1 << c.len(), 1 << c.len()))
        .collect();
    for (p, &t) in strings.iter().zip(theta) {
        let i = subsets
            .iter()
            .position(|c| p.is_supported_on(c))
            .ok_or_else(|| Error::OrphanString(p.to_string()))?;
        p.restrict(&subsets[i])?.accumulate(t, &mut sums[i]);
    }
    subsets
        .iter()
        .zip(sums)
        .map(|(c, m)| {
            Ok(LocalTerm {
                qubits: c.clone(),
                matrix: HermitianMatrix::new(ComplexMatrix::from_matrix(m)?)?,
            })
        })
        .collect()
}

/// `Σ_i M_i ⊗ I` on the full register.
pub fn sum_local_terms(terms: &[LocalTerm], n: usize) -> Result<ComplexMatrix> {
    let mut total = ComplexMatrix::zeros(1 << n);
    for t in terms {
        total = &total + &embed_operator(&t.matrix, &t.qubits, n)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Trace distance between each given marginal and the fitted state's;
    /// empty for expectation problems.
    pub marginal_distances: Vec<f64>,
    pub min_eigenvalue: f64,
    pub entropy_bits: f64,
    pub psi: f64,
}

impl VerificationReport {
    /// Residuals within `tol` and, for marginal problems, every trace
    /// distance within `4^{|C_i|}·tol`.
    pub fn passes(&self, tol: f64, problem: &Problem) -> bool {
        if !(self.max_residual <= tol) {
            return false;
        }
        match problem {
            Problem::Marginals(mp) => mp
                .constraints()
                .iter()
                .zip(&self.marginal_distances)
                .all(|(c, &d)| d <= 4f64.powi(c.qubits.len() as i32) * tol),
            Problem::Expectations(_) => true,
        }
    }
}

/// Rebuilds `ρ(θ)` from scratch and measures it against the problem.
pub fn verify(theta: &[f64], problem: &Problem) -> Result<VerificationReport> {
    let (ep, marginals) = match problem {
        Problem::Marginals(mp) => (reduce_to_expectations(mp)?.problem, Some(mp)),
        Problem::Expectations(ep) => (ep.clone(), None),
    };
    let translated = translate_to_zero(&ep);
    let state = gibbs_state(theta, translated.observables())?;
    let residuals: Vec<f64> = state.expectations.iter().map(|g| g.abs()).collect();
    let mut marginal_distances = Vec::new();
    if let Some(mp) = marginals {
        for c in mp.constraints() {
            let reduced = partial_trace(&state.rho, mp.num_qubits(), &c.qubits)?;
            marginal_distances.push(trace_distance(&reduced, &c.rho)?);
        }
    }
    let original = gibbs_state(theta, ep.observables())?;
    Ok(VerificationReport {
        max_residual: inf_norm(&residuals),
        residuals,
        marginal_distances,
        min_eigenvalue: state.min_weight(),
        entropy_bits: von_neumann_entropy(&state.rho)?,
        psi: original.psi,
    })
}
