//! The log-partition function `ψ(θ) = log Tr exp(Σ θ_i·T_i)` and its first
//! two derivatives.
//!
//! Everything is computed from one eigendecomposition of `H(θ)`: the state is
//! the softmax of the spectrum (shifted by `λ_max`), `∇ψ` is the vector of
//! expectation values, and the Hessian is the Kubo-Mori covariance built from
//! the divided-difference kernel of `exp`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{eigh, log_sum_exp, DensityMatrix, EigDecomposition, ExpFrechet, HermitianMatrix, C64};
use crate::observable::ObservableSet;

#[derive(Clone, Debug)]
pub struct GibbsState {
    pub theta: Vec<f64>,
    pub hamiltonian: HermitianMatrix,
    pub rho: DensityMatrix,
    pub psi: f64,
    pub expectations: Vec<f64>,
    eig: EigDecomposition,
}

impl GibbsState {
    pub fn eig(&self) -> &EigDecomposition {
        &self.eig
    }

    /// Smallest eigenvalue of `ρ(θ)`. It underflows to zero once the spectral
    /// gap of `H(θ)` exceeds about 745.
    pub fn min_weight(&self) -> f64 {
        (self.eig.min_eigenvalue() - self.psi).exp()
    }

    /// Hessian of `ψ` at this point; `obs` must be the set the state was
    /// built from.
    pub fn hessian(&self, obs: &ObservableSet) -> Result<DMatrix<f64>> {
        check_len(&self.theta, obs)?;
        let top = self.eig.max_eigenvalue();
        let frechet = ExpFrechet::from_eig(self.eig.clone(), top);
        // exp(ψ − λ_max) = Tr exp(H − λ_max·I)
        let z = (self.psi - top).exp();
        let kernel = frechet.kernel().map(|k| k / z);
        let d = self.eig.dim();
        let centered: Vec<DMatrix<C64>> = obs
            .iter()
            .zip(&self.expectations)
            .map(|(o, &mean)| {
                let mut m = DMatrix::<C64>::zeros(d, d);
                o.accumulate(1.0, &mut m);
                for k in 0..d {
                    m[(k, k)].re -= mean;
                }
                self.eig.eigenvectors.as_matrix().adjoint() * m * self.eig.eigenvectors.as_matrix()
            })
            .collect();
        let r = obs.len();
        let mut out = DMatrix::<f64>::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let mut acc = 0.0;
                for b in 0..d {
                    for a in 0..d {
                        acc += kernel[(a, b)] * (centered[i][(a, b)].conj() * centered[j][(a, b)]).re;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc;
            }
        }
        Ok(out)
    }
}

fn check_len(theta: &[f64], obs: &ObservableSet) -> Result<()> {
    if theta.len() != obs.len() {
        return Err(Error::DimensionMismatch(theta.len(), obs.len()));
    }
    Ok(())
}

/// `ψ(θ)`.
pub fn log_partition(theta: &[f64], obs: &ObservableSet) -> Result<f64> {
    let h = obs.hamiltonian(theta)?;
    let vals = crate::linalg::eigvalsh(&h)?;
    Ok(log_sum_exp(&vals))
}

pub fn gibbs_state(theta: &[f64], obs: &ObservableSet) -> Result<GibbsState> {
    let hamiltonian = obs.hamiltonian(theta)?;
    let eig = eigh(&hamiltonian)?;
    let psi = log_sum_exp(&eig.eigenvalues);
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|l| (l - psi).exp()).collect();
    let total: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let rho = DensityMatrix::from_hermitian_unchecked(eig.with_weights(&weights));
    let expectations = obs.expectations(&rho);
    Ok(GibbsState {
        theta: theta.to_vec(),
        hamiltonian,
        rho,
        psi,
        expectations,
        eig,
    })
}

/// `∇ψ(θ)`, the expectation values `Tr(T_i·ρ(θ))`.
pub fn gradient(theta: &[f64], obs: &ObservableSet) -> Result<Vec<f64>> {
    Ok(gibbs_state(theta, obs)?.expectations)
}

/// `∂²ψ/∂θ_i∂θ_j = Tr(T_i·D_j)/Z − ⟨T_i⟩⟨T_j⟩`, where `D_j` is the derivative
/// of `exp(H)` in direction `T_j`. Evaluated with centered observables so
/// the subtraction never happens explicitly.
pub fn hessian(theta: &[f64], obs: &ObservableSet) -> Result<DMatrix<f64>> {
    gibbs_state(theta, obs)?.hessian(obs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_directional_derivative, matrix_exp, trace_distance};
    use crate::observable::Observable;
    use crate::pauli::{Pauli, PauliString};
    use crate::random::{random_gaussian_vector, random_hermitian, seeded};
    use rand::Rng;

    fn paulis(n: usize, labels: &[&str]) -> ObservableSet {
        let items = labels
            .iter()
            .map(|l| Observable::pauli(PauliString::parse(l, n).unwrap()))
            .collect();
        ObservableSet::new(1 << n, items).unwrap()
    }

    fn random_set(n: usize, r: usize, rng: &mut impl Rng) -> ObservableSet {
        let d = 1 << n;
        let items = (0..r)
            .map(|k| {
                if k % 2 == 0 {
                    let idx = rng.random_range(1..4usize.pow(n as u32));
                    let p = PauliString::all(n).nth(idx).unwrap();
                    Observable::pauli(p).translated(rng.random_range(-0.5..0.5))
                } else {
                    Observable::matrix(random_hermitian(d, 1.5, rng))
                }
            })
            .collect();
        ObservableSet::new(d, items).unwrap()
    }

    #[test]
    fn psi_closed_forms() {
        let empty = ObservableSet::new(8, vec![]).unwrap();
        assert!((log_partition(&[], &empty).unwrap() - 3.0 * 2f64.ln()).abs() < 1e-14);

        let z = paulis(1, &["Z0"]);
        assert!((log_partition(&[1.0], &z).unwrap() - 1.1269280110429725).abs() < 1e-14);

        let zz = paulis(2, &["Z0", "Z1"]);
        let (a, b): (f64, f64) = (0.37, -1.4);
        let want = (2.0 * a.cosh()).ln() + (2.0 * b.cosh()).ln();
        assert!((log_partition(&[a, b], &zz).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn gibbs_state_basics() {
        let z = paulis(1, &["Z0"]);
        let g = gibbs_state(&[0.0], &z).unwrap();
        assert!(trace_distance(&g.rho, &DensityMatrix::maximally_mixed(2)).unwrap() < 1e-15);

        let theta = (-0.6f64).atanh();
        assert!((theta + std::f64::consts::LN_2).abs() < 1e-15);
        let g = gibbs_state(&[theta], &z).unwrap();
        assert!((g.expectations[0] + 0.6).abs() < 1e-14);
        assert!((g.rho.trace_re() - 1.0).abs() < 1e-14);
        assert!(g.min_weight() > 0.0);

        let mut rng = seeded(8);
        let obs = random_set(2, 5, &mut rng);
        let theta = random_gaussian_vector(5, 0.7, &mut rng);
        let g = gibbs_state(&theta, &obs).unwrap();
        // independent oracle: exp(H)/Tr exp(H) through the unshifted kernel
        let e = matrix_exp(&g.hamiltonian).unwrap();
        let z = e.trace_re();
        assert!((g.psi - z.ln()).abs() < 1e-12);
        assert!(trace_distance(&g.rho, &e.scale(1.0 / z)).unwrap() < 1e-12);
    }

    #[test]
    fn gradient_closed_forms() {
        let obs = paulis(2, &["X0", "Z1 Y0"]);
        assert!(gradient(&[0.0, 0.0], &obs).unwrap().iter().all(|g| g.abs() < 1e-15));

        let z = paulis(1, &["Z0"]);
        for t in [-2.0, -0.3, 0.0, 1.1] {
            assert!((gradient(&[t], &z).unwrap()[0] - f64::tanh(t)).abs() < 1e-14);
        }

        let zx = paulis(1, &["Z0", "X0"]);
        let (a, b) = (0.8, -0.45);
        let norm = f64::hypot(a, b);
        let g = gradient(&[a, b], &zx).unwrap();
        assert!((g[0] - norm.tanh() * a / norm).abs() < 1e-14);
        assert!((g[1] - norm.tanh() * b / norm).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = seeded(21);
        for trial in 0..20 {
            let n = 1 + trial % 3;
            let r = 1 + trial % 6;
            let obs = random_set(n, r, &mut rng);
            let theta = random_gaussian_vector(r, 0.8, &mut rng);
            let g = gradient(&theta, &obs).unwrap();
            let h = 1e-5;
            for i in 0..r {
                let mut up = theta.clone();
                let mut down = theta.clone();
                up[i] += h;
                down[i] -= h;
                let fd = (log_partition(&up, &obs).unwrap() - log_partition(&down, &obs).unwrap()) / (2.0 * h);
                assert!((fd - g[i]).abs() <= 1e-6 * g[i].abs().max(1.0), "trial {trial} i {i}");
            }
        }
    }

    #[test]
    fn hessian_single_qubit_is_sech_squared() {
        let z = paulis(1, &["Z0"]);
        for t in [-3.0, -0.5, 0.0, 0.9, 4.0] {
            let h = hessian(&[t], &z).unwrap();
            let sech = 1.0 / f64::cosh(t);
            assert!((h[(0, 0)] - sech * sech).abs() < 1e-12);
        }
    }

    #[test]
    fn hessian_at_origin_is_trace_gram() {
        let obs = paulis(2, &["X0", "Y1", "Z0 Z1"]);
        let h = hessian(&[0.0; 3], &obs).unwrap();
        assert!((h - DMatrix::<f64>::identity(3, 3)).amax() < 1e-14);

        let mut rng = seeded(5);
        let obs = random_set(2, 4, &mut rng);
        let h = hessian(&[0.0; 4], &obs).unwrap();
        let mats: Vec<_> = obs.iter().map(|o| o.to_matrix().unwrap()).collect();
        let means: Vec<f64> = mats.iter().map(|m| m.trace_re() / 4.0).collect();
        for i in 0..4 {
            for j in 0..4 {
                let want = mats[i].trace_product(&mats[j]) / 4.0 - means[i] * means[j];
                assert!((h[(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hessian_of_commuting_diagonals_is_classical_covariance() {
        let d1 = [0.3, -1.2, 0.8, 2.0];
        let d2 = [1.0, 0.5, -0.7, 0.1];
        let obs = ObservableSet::new(
            4,
            vec![
                Observable::matrix(HermitianMatrix::from_real_diagonal(&d1)),
                Observable::matrix(HermitianMatrix::from_real_diagonal(&d2)),
            ],
        )
        .unwrap();
        let theta = [0.6, -1.3];
        let energies: Vec<f64> = (0..4).map(|k| theta[0] * d1[k] + theta[1] * d2[k]).collect();
        let z: f64 = energies.iter().map(|e| e.exp()).sum();
        let p: Vec<f64> = energies.iter().map(|e| e.exp() / z).collect();
        let mean = |f: &dyn Fn(usize) -> f64| (0..4).map(|k| p[k] * f(k)).sum::<f64>();
        let m1 = mean(&|k| d1[k]);
        let m2 = mean(&|k| d2[k]);
        let cov = [
            [mean(&|k| d1[k] * d1[k]) - m1 * m1, mean(&|k| d1[k] * d2[k]) - m1 * m2],
            [mean(&|k| d2[k] * d1[k]) - m2 * m1, mean(&|k| d2[k] * d2[k]) - m2 * m2],
        ];
        let h = hessian(&theta, &obs).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((h[(i, j)] - cov[i][j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn hessian_matches_frechet_formula_and_finite_differences() {
        let mut rng = seeded(77);
        for trial in 0..10 {
            let n = 1 + trial % 3;
            let r = 2 + trial % 4;
            let obs = random_set(n, r, &mut rng);
            let theta = random_gaussian_vector(r, 0.6, &mut rng);
            let g = gibbs_state(&theta, &obs).unwrap();
            let h = g.hessian(&obs).unwrap();

            // Tr(T_i·D_j)/Z − ⟨T_i⟩⟨T_j⟩ with D_j from the generic directional derivative
            let z = g.psi.exp();
            let mats: Vec<_> = obs.iter().map(|o| o.to_matrix().unwrap()).collect();
            for j in 0..r {
                let dj = expm_directional_derivative(&g.hamiltonian, &mats[j]).unwrap();
                for i in 0..r {
                    let want = mats[i].trace_product(&dj) / z - g.expectations[i] * g.expectations[j];
                    assert!((h[(i, j)] - want).abs() < 1e-10);
                }
            }

            let step = 1e-5;
            for j in 0..r {
                let mut up = theta.clone();
                let mut down = theta.clone();
                up[j] += step;
                down[j] -= step;
                let gu = gradient(&up, &obs).unwrap();
                let gd = gradient(&down, &obs).unwrap();
                for i in 0..r {
                    let fd = (gu[i] - gd[i]) / (2.0 * step);
                    assert!((fd - h[(i, j)]).abs() < 1e-5);
                }
            }
            assert!((h.clone() - h.transpose()).amax() < 1e-12);
            let min = h.symmetric_eigenvalues().min();
            assert!(min > -1e-9);
        }
    }

    #[test]
    fn convexity_on_random_segments() {
        let mut rng = seeded(3);
        for _ in 0..200 {
            let n = rng.random_range(1..=3);
            let r = rng.random_range(1..=6);
            let obs = random_set(n, r, &mut rng);
            let a = random_gaussian_vector(r, 2.0, &mut rng);
            let b = random_gaussian_vector(r, 2.0, &mut rng);
            let lambda: f64 = rng.random_range(0.0..1.0);
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect();
            let lhs = log_partition(&mid, &obs).unwrap();
            let rhs = lambda * log_partition(&a, &obs).unwrap() + (1.0 - lambda) * log_partition(&b, &obs).unwrap();
            assert!(lhs <= rhs + 1e-9);
        }
    }

    #[test]
    fn translation_changes_psi_not_state() {
        let mut rng = seeded(12);
        for _ in 0..20 {
            let obs = random_set(2, 4, &mut rng);
            let shifts = random_gaussian_vector(4, 1.0, &mut rng);
            let moved = ObservableSet::new(
                4,
                obs.iter().zip(&shifts).map(|(o, &s)| o.shifted(s)).collect(),
            )
            .unwrap();
            let theta = random_gaussian_vector(4, 1.0, &mut rng);
            let a = gibbs_state(&theta, &obs).unwrap();
            let b = gibbs_state(&theta, &moved).unwrap();
            assert!(trace_distance(&a.rho, &b.rho).unwrap() <= 1e-10);
            let dot: f64 = theta.iter().zip(&shifts).map(|(t, s)| t * s).sum();
            assert!((b.psi - a.psi - dot).abs() < 1e-9);
        }
    }

    #[test]
    fn restriction_to_prefix_is_exact() {
        let mut rng = seeded(13);
        let obs = random_set(2, 6, &mut rng);
        let prefix = ObservableSet::new(4, obs.items()[..3].to_vec()).unwrap();
        let theta = random_gaussian_vector(3, 1.0, &mut rng);
        let mut padded = theta.clone();
        padded.extend([0.0; 3]);
        assert_eq!(
            log_partition(&padded, &obs).unwrap(),
            log_partition(&theta, &prefix).unwrap()
        );
    }

    #[test]
    fn large_parameters_do_not_overflow() {
        let z = ObservableSet::new(
            2,
            vec![Observable::pauli(PauliString::single(1, 0, Pauli::Z).unwrap()).shifted(1.0)],
        )
        .unwrap();
        let g = gibbs_state(&[-400.0], &z).unwrap();
        assert!(g.psi.is_finite());
        // ⟨Z + I⟩ = 2·e^{−400}/(e^{−400} + e^{400}) ≈ 2e^{−800} underflows to zero
        assert!(g.expectations[0] >= 0.0 && g.expectations[0] < 1e-300);
        let g = gibbs_state(&[-50.0], &z).unwrap();
        let want = 2.0 / (1.0 + (100.0f64).exp());
        assert!((g.expectations[0] / want - 1.0).abs() < 1e-12);
        assert!(log_partition(&[1e5], &z).unwrap().is_finite());
    }
}
