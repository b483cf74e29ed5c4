//! Limited-memory BFGS direction and an Armijo backtracking line search.

use std::collections::VecDeque;

pub const MEMORY: usize = 10;
pub const ARMIJO_C: f64 = 1e-4;
pub const MAX_HALVINGS: usize = 60;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Curvature pairs `(s, y, 1/yᵀs)`, newest last.
#[derive(Clone, Debug, Default)]
pub struct Memory {
    pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)>,
}

impl Memory {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn clear(&mut self) {
        self.pairs.clear();
    }

    /// Stores the pair unless the curvature condition `yᵀs > 0` fails
    /// numerically; returns whether it was kept.
    pub fn push(&mut self, s: Vec<f64>, y: Vec<f64>) -> bool {
        let sy = dot(&s, &y);
        if !(sy > 1e-300) || sy <= 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            return false;
        }
        if self.pairs.len() == MEMORY {
            self.pairs.pop_front();
        }
        self.pairs.push_back((s, y, 1.0 / sy));
        true
    }

    /// Two-loop recursion: returns `−H_k·g` with the initial scaling
    /// `sᵀy/yᵀy` from the newest pair.
    pub fn direction(&self, g: &[f64]) -> Vec<f64> {
        let mut q = g.to_vec();
        let mut alphas = Vec::with_capacity(self.pairs.len());
        for (s, y, rho) in self.pairs.iter().rev() {
            let a = rho * dot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= a * yi;
            }
            alphas.push(a);
        }
        if let Some((s, y, _)) = self.pairs.back() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|x| *x *= gamma);
        }
        for ((s, y, rho), a) in self.pairs.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                *qi += (a - b) * si;
            }
        }
        q.iter_mut().for_each(|x| *x = -*x);
        q
    }
}

/// A point returned by the objective: value and gradient plus whatever the
/// caller wants to keep from the evaluation.
pub struct Evaluation<T> {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub extra: T,
}

pub enum LineSearch<T> {
    Accepted { step: f64, point: Vec<f64>, eval: Evaluation<T> },
    Failed,
}

/// Backtracks from step 1 by halving until
/// `f(x + αd) ≤ f(x) + c·α·gᵀd`. Once the decrease predicted by the model
/// drops below the rounding level of `f`, the Armijo test is meaningless and
/// a trial is accepted instead when `f` did not rise beyond rounding and the
/// gradient shrank.
pub fn armijo<T, E>(
    x: &[f64],
    current: &Evaluation<T>,
    direction: &[f64],
    mut objective: impl FnMut(&[f64]) -> Result<Evaluation<T>, E>,
) -> Result<LineSearch<T>, E> {
    let slope = dot(&current.gradient, direction);
    debug_assert!(slope < 0.0);
    let noise = 4.0 * f64::EPSILON * current.value.abs().max(1.0);
    let g_norm = inf_norm(&current.gradient);
    let mut step = 1.0;
    for _ in 0..MAX_HALVINGS {
        let point: Vec<f64> = x.iter().zip(direction).map(|(xi, di)| xi + step * di).collect();
        let eval = objective(&point)?;
        if eval.value.is_finite() {
            let armijo = eval.value <= current.value + ARMIJO_C * step * slope;
            let flat = -ARMIJO_C * step * slope < noise
                && eval.value <= current.value + noise
                && inf_norm(&eval.gradient) < g_norm;
            if armijo || flat {
                return Ok(LineSearch::Accepted { step, point, eval });
            }
        }
        step *= 0.5;
    }
    Ok(LineSearch::Failed)
}
