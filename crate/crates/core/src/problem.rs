//! Problem data and the reductions and necessary-condition checks that run
//! before any optimization.
//!
//! A [`MarginalProblem`] fixes local density matrices on qubit subsets. Since
//! a reduced state is determined by the expectation values of all Pauli
//! strings on its subset, [`reduce_to_expectations`] rewrites it as an
//! [`ExpectationProblem`] with one target per distinct string. Overlapping
//! marginals must agree on their intersection ([`check_local_compatibility`]),
//! and strong subadditivity with `S(global) ≥ 0` gives the further necessary
//! condition `S(ρ_i) + S(ρ_j) ≥ S(ρ_{C_i ∩ C_j})` ([`entropy_diagnostic`]).
//! Passing both checks does not prove global consistency.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    check_subset, partial_trace, trace_distance, von_neumann_entropy, DensityMatrix, MAX_QUBITS,
};
use crate::observable::{Observable, ObservableSet};
use crate::pauli::PauliString;

/// Maximum trace distance between overlap marginals still deemed equal.
pub const OVERLAP_TOL: f64 = 1e-9;
/// Disagreement between two implied targets of the same Pauli string that
/// counts as a conflict.
pub const TARGET_CONFLICT_TOL: f64 = 1e-9;
/// Entropy deficit (bits) reported as a violation.
pub const ENTROPY_TOL: f64 = 1e-9;
/// Relative Gram eigenvalue below which observables are dependent.
pub const INDEPENDENCE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct MarginalConstraint {
    pub qubits: Vec<usize>,
    pub rho: DensityMatrix,
}

#[derive(Clone, Debug)]
pub struct MarginalProblem {
    n: usize,
    constraints: Vec<MarginalConstraint>,
}

impl MarginalProblem {
    pub fn new(n: usize, constraints: Vec<MarginalConstraint>) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::QubitCap { n, cap: MAX_QUBITS });
        }
        if constraints.is_empty() {
            return Err(Error::EmptyProblem);
        }
        for c in &constraints {
            check_subset(&c.qubits, n, false)?;
            let expected = 1usize << c.qubits.len();
            if c.rho.dim() != expected {
                return Err(Error::DimensionMismatch(c.rho.dim(), expected));
            }
        }
        Ok(Self { n, constraints })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[MarginalConstraint] {
        &self.constraints
    }

    pub fn subsets(&self) -> Vec<Vec<usize>> {
        self.constraints.iter().map(|c| c.qubits.clone()).collect()
    }
}

/// Either kind of input accepted by the solver.
#[derive(Clone, Debug)]
pub enum Problem {
    Marginals(MarginalProblem),
    Expectations(ExpectationProblem),
}

/// Observables `T_i` with targets `t_i`. After [`translate_to_zero`] the
/// targets are all zero and `original_targets` keeps the values supplied by
/// the caller.
#[derive(Clone, Debug)]
pub struct ExpectationProblem {
    n: Option<usize>,
    observables: ObservableSet,
    targets: Vec<f64>,
    original_targets: Vec<f64>,
}

impl ExpectationProblem {
    /// `n` is the qubit count when the space is a register; it is `None` for
    /// problems posed on a bare matrix dimension.
    pub fn new(n: Option<usize>, observables: ObservableSet, targets: Vec<f64>) -> Result<Self> {
        if observables.len() != targets.len() {
            return Err(Error::DimensionMismatch(observables.len(), targets.len()));
        }
        if let Some(n) = n {
            if n > MAX_QUBITS {
                return Err(Error::QubitCap { n, cap: MAX_QUBITS });
            }
            if observables.dim() != 1 << n {
                return Err(Error::DimensionMismatch(observables.dim(), 1 << n));
            }
        }
        for (index, (obs, &target)) in observables.iter().zip(&targets).enumerate() {
            let radius = obs.spectral_radius()?;
            if !target.is_finite() || target.abs() > radius + 1e-12 {
                return Err(Error::TargetOutOfRange {
                    index,
                    target,
                    radius,
                });
            }
        }
        Ok(Self {
            n,
            observables,
            original_targets: targets.clone(),
            targets,
        })
    }

    pub fn num_qubits(&self) -> Option<usize> {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.observables.dim()
    }

    pub fn observables(&self) -> &ObservableSet {
        &self.observables
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn original_targets(&self) -> &[f64] {
        &self.original_targets
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn is_translated(&self) -> bool {
        self.targets.iter().all(|&t| t == 0.0)
    }

    /// Pauli strings of the observables, if every observable is one.
    pub fn pauli_strings(&self) -> Option<Vec<PauliString>> {
        self.observables
            .iter()
            .map(|o| o.as_pauli().cloned())
            .collect()
    }
}

/// `T_i ← T_i − t_i·I`, `t_i ← 0`. The Gibbs family is unchanged; only the
/// log-partition function moves by `−Σ θ_i t_i`.
pub fn translate_to_zero(ep: &ExpectationProblem) -> ExpectationProblem {
    let items: Vec<Observable> = ep
        .observables
        .iter()
        .zip(&ep.targets)
        .map(|(o, &t)| if t == 0.0 { o.clone() } else { o.translated(t) })
        .collect();
    ExpectationProblem {
        n: ep.n,
        observables: ObservableSet::new(ep.dim(), items).expect("dimensions unchanged"),
        targets: vec![0.0; ep.targets.len()],
        original_targets: ep.original_targets.clone(),
    }
}

/// Result of reducing a marginal problem: the expectation problem plus the
/// subset each string's target was first read from.
#[derive(Clone, Debug)]
pub struct MarginalReduction {
    pub problem: ExpectationProblem,
    pub strings: Vec<PauliString>,
    pub source: Vec<usize>,
}

/// One constraint per distinct non-identity Pauli string supported on some
/// subset, ordered by first appearance. Each target is read from the first
/// constraint containing the string and cross-checked against all later ones.
pub fn reduce_to_expectations(mp: &MarginalProblem) -> Result<MarginalReduction> {
    let n = mp.n;
    let mut index: HashMap<PauliString, usize> = HashMap::new();
    let mut strings = Vec::new();
    let mut targets: Vec<f64> = Vec::new();
    let mut source: Vec<usize> = Vec::new();
    for (ci, c) in mp.constraints.iter().enumerate() {
        for local in PauliString::all(c.qubits.len()).skip(1) {
            let value = local.expectation(&c.rho);
            let global = local.embed(&c.qubits, n)?;
            match index.get(&global) {
                Some(&k) => {
                    if (targets[k] - value).abs() > TARGET_CONFLICT_TOL {
                        return Err(Error::TargetConflict {
                            string: global.to_string(),
                            first: targets[k],
                            first_subset: mp.constraints[source[k]].qubits.clone(),
                            second: value,
                            second_subset: c.qubits.clone(),
                        });
                    }
                }
                None => {
                    index.insert(global.clone(), strings.len());
                    strings.push(global);
                    targets.push(value);
                    source.push(ci);
                }
            }
        }
    }
    let items = strings.iter().cloned().map(Observable::pauli).collect();
    let observables = ObservableSet::new(1 << n, items)?;
    let problem = ExpectationProblem::new(Some(n), observables, targets)?;
    Ok(MarginalReduction {
        problem,
        strings,
        source,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub independent: bool,
    /// Smallest and largest Gram eigenvalue; both `None` when the Pauli
    /// shortcut decided the question symbolically.
    pub min_eigenvalue: Option<f64>,
    pub max_eigenvalue: Option<f64>,
    pub symbolic: bool,
}

impl IndependenceReport {
    pub fn ratio(&self) -> f64 {
        match (self.min_eigenvalue, self.max_eigenvalue) {
            (Some(lo), Some(hi)) if hi > 0.0 => lo / hi,
            _ if self.independent => 1.0,
            _ => 0.0,
        }
    }
}

/// Linear independence of `{I, T_1, …, T_r}` over ℝ via the Hilbert–Schmidt
/// Gram matrix. Distinct non-identity Pauli strings are orthogonal to each
/// other and to `I`, so Pauli-only problems are decided symbolically.
pub fn check_independence(ep: &ExpectationProblem) -> Result<IndependenceReport> {
    let obs = ep.observables();
    if obs.is_pauli_only() {
        let mut seen = std::collections::HashSet::new();
        let independent = obs.iter().all(|o| {
            let p = o.as_pauli().expect("pauli-only");
            !p.is_identity() && seen.insert(p.clone())
        });
        return Ok(IndependenceReport {
            independent,
            min_eigenvalue: None,
            max_eigenvalue: None,
            symbolic: true,
        });
    }
    let dim = obs.dim();
    let mut mats = vec![crate::linalg::HermitianMatrix::identity(dim)];
    for o in obs.iter() {
        mats.push(o.to_matrix()?);
    }
    let r = mats.len();
    let mut gram = DMatrix::<f64>::zeros(r, r);
    for a in 0..r {
        for b in a..r {
            let g = mats[a].trace_product(&mats[b]);
            gram[(a, b)] = g;
            gram[(b, a)] = g;
        }
    }
    let vals = gram.symmetric_eigenvalues();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(IndependenceReport {
        independent: lo > INDEPENDENCE_TOL * hi,
        min_eigenvalue: Some(lo),
        max_eigenvalue: Some(hi),
        symbolic: false,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapResidual {
    pub first: usize,
    pub second: usize,
    pub overlap: Vec<usize>,
    pub trace_distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyViolation {
    pub first: usize,
    pub second: usize,
    pub overlap: Vec<usize>,
    pub entropy_first: f64,
    pub entropy_second: f64,
    pub entropy_overlap: f64,
    /// `S(overlap) − S(ρ_i) − S(ρ_j)` in bits; positive.
    pub deficit: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Compatible,
    LocallyIncompatible,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityReport {
    pub pairs: Vec<OverlapResidual>,
    pub entropy_violations: Vec<EntropyViolation>,
    pub verdict: Verdict,
}

impl CompatibilityReport {
    pub fn max_distance(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.trace_distance)
            .fold(0.0, f64::max)
    }
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|q| b.contains(q)).collect()
}

/// Positions of `qubits` inside `subset`.
fn local_positions(subset: &[usize], qubits: &[usize]) -> Vec<usize> {
    qubits
        .iter()
        .map(|q| subset.iter().position(|s| s == q).expect("qubit in subset"))
        .collect()
}

fn overlap_marginal(c: &MarginalConstraint, overlap: &[usize]) -> Result<DensityMatrix> {
    partial_trace(&c.rho, c.qubits.len(), &local_positions(&c.qubits, overlap))
}

fn overlapping_pairs(mp: &MarginalProblem) -> impl Iterator<Item = (usize, usize, Vec<usize>)> + '_ {
    let m = mp.constraints.len();
    (0..m).flat_map(move |i| {
        (i + 1..m).filter_map(move |j| {
            let o = intersection(&mp.constraints[i].qubits, &mp.constraints[j].qubits);
            (!o.is_empty()).then_some((i, j, o))
        })
    })
}

/// Trace distance between the two reductions onto `C_i ∩ C_j` for every
/// overlapping pair. The entropy list is left empty.
pub fn check_local_compatibility(mp: &MarginalProblem) -> Result<CompatibilityReport> {
    let mut pairs = Vec::new();
    for (i, j, overlap) in overlapping_pairs(mp) {
        let a = overlap_marginal(&mp.constraints[i], &overlap)?;
        let b = overlap_marginal(&mp.constraints[j], &overlap)?;
        pairs.push(OverlapResidual {
            first: i,
            second: j,
            overlap,
            trace_distance: trace_distance(&a, &b)?,
        });
    }
    let verdict = if pairs.iter().all(|p| p.trace_distance <= OVERLAP_TOL) {
        Verdict::Compatible
    } else {
        Verdict::LocallyIncompatible
    };
    Ok(CompatibilityReport {
        pairs,
        entropy_violations: Vec::new(),
        verdict,
    })
}

/// Pairs violating `S(ρ_i) + S(ρ_j) ≥ S(ρ_overlap)` by more than
/// [`ENTROPY_TOL`] bits. Any entry proves that no global state exists; an
/// empty list proves nothing. The overlap marginal is taken from `ρ_i`.
pub fn entropy_diagnostic(mp: &MarginalProblem) -> Result<Vec<EntropyViolation>> {
    let entropies = mp
        .constraints
        .iter()
        .map(|c| von_neumann_entropy(&c.rho))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (i, j, overlap) in overlapping_pairs(mp) {
        let s_overlap = von_neumann_entropy(&overlap_marginal(&mp.constraints[i], &overlap)?)?;
        let deficit = s_overlap - entropies[i] - entropies[j];
        if deficit > ENTROPY_TOL {
            out.push(EntropyViolation {
                first: i,
                second: j,
                overlap,
                entropy_first: entropies[i],
                entropy_second: entropies[j],
                entropy_overlap: s_overlap,
                deficit,
            });
        }
    }
    Ok(out)
}

/// Local compatibility plus, when that passes, the entropy diagnostic.
pub fn diagnose(mp: &MarginalProblem) -> Result<CompatibilityReport> {
    let mut report = check_local_compatibility(mp)?;
    if report.verdict == Verdict::Compatible {
        report.entropy_violations = entropy_diagnostic(mp)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, HermitianMatrix, C64};
    use crate::pauli::{marginal_from_expectations, Pauli};
    use crate::random::{random_density, seeded};

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c64(s, 0.0), C64::default(), C64::default(), c64(s, 0.0)]).unwrap()
    }

    fn bell_chain() -> MarginalProblem {
        MarginalProblem::new(
            3,
            vec![
                MarginalConstraint { qubits: vec![0, 1], rho: bell() },
                MarginalConstraint { qubits: vec![1, 2], rho: bell() },
            ],
        )
        .unwrap()
    }

    fn target(r: &MarginalReduction, s: &str) -> f64 {
        let p = PauliString::parse(s, r.problem.num_qubits().unwrap()).unwrap();
        let k = r.strings.iter().position(|q| *q == p).unwrap();
        r.problem.targets()[k]
    }

    #[test]
    fn reduce_single_maximally_mixed_qubit() {
        let mp = MarginalProblem::new(
            2,
            vec![MarginalConstraint { qubits: vec![0], rho: DensityMatrix::maximally_mixed(2) }],
        )
        .unwrap();
        let r = reduce_to_expectations(&mp).unwrap();
        let labels: Vec<_> = r.strings.iter().map(|p| p.to_string()).collect();
        assert_eq!(labels, ["X0", "Y0", "Z0"]);
        assert!(r.problem.targets().iter().all(|&t| t == 0.0));
    }

    #[test]
    fn reduce_bell_state() {
        let mp = MarginalProblem::new(
            2,
            vec![MarginalConstraint { qubits: vec![0, 1], rho: bell() }],
        )
        .unwrap();
        let r = reduce_to_expectations(&mp).unwrap();
        assert_eq!(r.strings.len(), 15);
        assert!((target(&r, "X0 X1") - 1.0).abs() < 1e-15);
        assert!((target(&r, "Z0 Z1") - 1.0).abs() < 1e-15);
        assert!((target(&r, "Y0 Y1") + 1.0).abs() < 1e-15);
        assert!(target(&r, "Z0").abs() < 1e-15);
        // independent oracle: Tr(P·ρ) through dense matrices
        for (p, &t) in r.strings.iter().zip(r.problem.targets()) {
            let dense = p.materialize().unwrap().trace_product(&bell());
            assert!((dense - t).abs() < 1e-15);
        }
    }

    #[test]
    fn reduce_bell_chain_deduplicates() {
        let r = reduce_to_expectations(&bell_chain()).unwrap();
        assert_eq!(r.strings.len(), 27);
        let unique: std::collections::HashSet<_> = r.strings.iter().collect();
        assert_eq!(unique.len(), 27);
    }

    #[test]
    fn reduce_reports_conflicts() {
        let mp = MarginalProblem::new(
            2,
            vec![
                MarginalConstraint { qubits: vec![0, 1], rho: bell() },
                MarginalConstraint { qubits: vec![1], rho: DensityMatrix::basis(2, 0) },
            ],
        )
        .unwrap();
        match reduce_to_expectations(&mp) {
            Err(Error::TargetConflict { string, first_subset, second_subset, .. }) => {
                assert_eq!(string, "Z1");
                assert_eq!(first_subset, vec![0, 1]);
                assert_eq!(second_subset, vec![1]);
            }
            other => panic!("expected conflict, got {other:?}"),
        }
    }

    #[test]
    fn reduction_round_trips_through_marginal_reconstruction() {
        let mut rng = seeded(31);
        let mp = MarginalProblem::new(
            3,
            vec![
                MarginalConstraint { qubits: vec![0, 2], rho: random_density(4, &mut rng) },
                MarginalConstraint { qubits: vec![1], rho: random_density(2, &mut rng) },
            ],
        )
        .unwrap();
        let r = reduce_to_expectations(&mp).unwrap();
        for c in mp.constraints() {
            let targets = r
                .strings
                .iter()
                .zip(r.problem.targets())
                .filter(|(p, _)| p.is_supported_on(&c.qubits))
                .map(|(p, &t)| (p.clone(), t))
                .collect();
            let back = marginal_from_expectations(&c.qubits, &targets).unwrap();
            assert!(trace_distance(&back.matrix, &c.rho).unwrap() < 1e-10);
        }
    }

    #[test]
    fn translation() {
        let z = Observable::pauli(PauliString::single(1, 0, Pauli::Z).unwrap());
        let set = ObservableSet::new(2, vec![z]).unwrap();
        let ep = ExpectationProblem::new(Some(1), set, vec![-0.6]).unwrap();
        let t = translate_to_zero(&ep);
        assert_eq!(t.targets(), &[0.0]);
        assert_eq!(t.original_targets(), &[-0.6]);
        assert!((t.observables().get(0).offset - 0.6).abs() < 1e-15);
        let dense = t.observables().get(0).to_matrix().unwrap();
        assert_eq!(dense, HermitianMatrix::from_real_diagonal(&[1.6, -0.4]));

        let zero = translate_to_zero(&t);
        assert_eq!(zero.observables(), t.observables());

        let mut rng = seeded(4);
        let rho = random_density(2, &mut rng);
        let before = ep.observables().get(0).expectation(&rho);
        let after = t.observables().get(0).expectation(&rho);
        assert!((after - (before + 0.6)).abs() < 1e-15);
    }

    #[test]
    fn target_outside_spectral_radius_is_rejected() {
        let z = Observable::pauli(PauliString::single(1, 0, Pauli::Z).unwrap());
        let set = ObservableSet::new(2, vec![z]).unwrap();
        assert!(matches!(
            ExpectationProblem::new(Some(1), set, vec![1.5]),
            Err(Error::TargetOutOfRange { .. })
        ));
    }

    fn problem_of(mats: Vec<Observable>) -> ExpectationProblem {
        let r = mats.len();
        ExpectationProblem::new(Some(1), ObservableSet::new(2, mats).unwrap(), vec![0.0; r]).unwrap()
    }

    #[test]
    fn independence() {
        let x = Observable::pauli(PauliString::single(1, 0, Pauli::X).unwrap());
        let z = Observable::pauli(PauliString::single(1, 0, Pauli::Z).unwrap());
        let report = check_independence(&problem_of(vec![x.clone(), z.clone()])).unwrap();
        assert!(report.independent && report.symbolic);
        let dup = check_independence(&problem_of(vec![z.clone(), z.clone()])).unwrap();
        assert!(!dup.independent);

        let z_dense = Observable::matrix(HermitianMatrix::from_real_diagonal(&[1.0, -1.0]));
        let two_z = Observable::matrix(HermitianMatrix::from_real_diagonal(&[2.0, -2.0]));
        let report = check_independence(&problem_of(vec![z_dense.clone(), two_z])).unwrap();
        assert!(!report.independent);

        // Gram of {I, Z + 0.6·I} is [[2, 1.2], [1.2, 2.72]] with determinant 4.
        let shifted = Observable::matrix(HermitianMatrix::from_real_diagonal(&[1.6, -0.4]));
        let report = check_independence(&problem_of(vec![shifted])).unwrap();
        assert!(report.independent);
        let (lo, hi) = (report.min_eigenvalue.unwrap(), report.max_eigenvalue.unwrap());
        assert!((lo * hi - 4.0).abs() < 1e-12);
        assert!((lo + hi - 4.72).abs() < 1e-12);

        let identity_like = Observable::matrix(HermitianMatrix::identity(2).scale(3.0));
        assert!(!check_independence(&problem_of(vec![identity_like])).unwrap().independent);
    }

    #[test]
    fn compatibility() {
        let single = MarginalProblem::new(
            2,
            vec![MarginalConstraint { qubits: vec![0, 1], rho: bell() }],
        )
        .unwrap();
        let report = check_local_compatibility(&single).unwrap();
        assert_eq!(report.verdict, Verdict::Compatible);
        assert!(report.pairs.is_empty());

        let report = check_local_compatibility(&bell_chain()).unwrap();
        assert_eq!(report.verdict, Verdict::Compatible);
        assert_eq!(report.pairs.len(), 1);
        assert_eq!(report.pairs[0].overlap, vec![1]);
        assert!(report.pairs[0].trace_distance < 1e-15);

        let clash = MarginalProblem::new(
            2,
            vec![
                MarginalConstraint { qubits: vec![0, 1], rho: bell() },
                MarginalConstraint { qubits: vec![1], rho: DensityMatrix::basis(2, 0) },
            ],
        )
        .unwrap();
        let report = check_local_compatibility(&clash).unwrap();
        assert_eq!(report.verdict, Verdict::LocallyIncompatible);
        assert!((report.pairs[0].trace_distance - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entropy_flags_bell_chain() {
        let v = entropy_diagnostic(&bell_chain()).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].entropy_first.abs() < 1e-9);
        assert!(v[0].entropy_second.abs() < 1e-9);
        assert!((v[0].entropy_overlap - 1.0).abs() < 1e-9);
        assert!((v[0].deficit - 1.0).abs() < 1e-9);
    }

    #[test]
    fn entropy_passes_product_marginals() {
        let mixed = DensityMatrix::maximally_mixed(4);
        let mp = MarginalProblem::new(
            3,
            vec![
                MarginalConstraint { qubits: vec![0, 1], rho: mixed.clone() },
                MarginalConstraint { qubits: vec![1, 2], rho: mixed },
            ],
        )
        .unwrap();
        assert!(entropy_diagnostic(&mp).unwrap().is_empty());
        assert!(diagnose(&mp).unwrap().entropy_violations.is_empty());
    }

    #[test]
    fn problem_validation() {
        assert!(matches!(MarginalProblem::new(2, vec![]), Err(Error::EmptyProblem)));
        let wrong_dim = MarginalConstraint { qubits: vec![0, 1], rho: DensityMatrix::maximally_mixed(2) };
        assert!(MarginalProblem::new(2, vec![wrong_dim]).is_err());
        let out_of_range = MarginalConstraint { qubits: vec![3], rho: DensityMatrix::maximally_mixed(2) };
        assert!(MarginalProblem::new(2, vec![out_of_range]).is_err());
        let unsorted = MarginalConstraint { qubits: vec![1, 0], rho: DensityMatrix::maximally_mixed(4) };
        assert!(MarginalProblem::new(2, vec![unsorted]).is_err());
        let too_big = MarginalConstraint { qubits: vec![0], rho: DensityMatrix::maximally_mixed(2) };
        assert!(MarginalProblem::new(13, vec![too_big]).is_err());
    }
}
