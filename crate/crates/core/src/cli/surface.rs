//! `ψ′` sampled on a rectangular grid for problems with one or two
//! observables.

use std::io::Write;

use crate::error::Result;
use crate::observable::ObservableSet;
use crate::partition::log_partition;
use crate::solver::SolveResult;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridRange {
    /// Parses `lo:hi:steps`; `steps` counts grid points including both ends.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("expected lo:hi:steps, got {text:?}"));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
        let steps: usize = steps.trim().parse().map_err(|e| format!("bad step count {steps:?}: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("range needs finite lo < hi, got {lo}:{hi}"));
        }
        if steps < 2 {
            return Err(format!("need at least 2 grid points, got {steps}"));
        }
        Ok(Self { lo, hi, steps })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.steps - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.hi } else { self.lo + k as f64 * self.spacing() })
            .collect()
    }
}

/// One grid node.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfacePoint {
    pub theta: Vec<f64>,
    pub psi: f64,
}

/// Evaluates `ψ` of `obs` (one or two observables) on the grid, with the
/// first coordinate varying slowest.
pub fn evaluate_grid(obs: &ObservableSet, range: &GridRange) -> Result<Vec<SurfacePoint>> {
    let pts = range.points();
    let mut out = Vec::new();
    if obs.len() == 1 {
        for &t in &pts {
            out.push(SurfacePoint { theta: vec![t], psi: log_partition(&[t], obs)? });
        }
    } else {
        for &t in &pts {
            for &p in &pts {
                out.push(SurfacePoint { theta: vec![t, p], psi: log_partition(&[t, p], obs)? });
            }
        }
    }
    Ok(out)
}

pub fn grid_minimum(points: &[SurfacePoint]) -> &SurfacePoint {
    points
        .iter()
        .min_by(|a, b| a.psi.total_cmp(&b.psi))
        .expect("nonempty grid")
}

/// CSV with header `theta,phi,psi` (`theta,psi` in one dimension) and a
/// closing comment line holding the solver's minimizer.
pub fn write_csv(points: &[SurfacePoint], result: &SolveResult, out: &mut dyn Write) -> std::io::Result<()> {
    let two_d = points.first().is_some_and(|p| p.theta.len() == 2);
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        if two_d {
            w.write_record(["theta", "phi", "psi"])?;
        } else {
            w.write_record(["theta", "psi"])?;
        }
        for p in points {
            let mut row: Vec<String> = p.theta.iter().map(|x| x.to_string()).collect();
            row.push(p.psi.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    let coords: Vec<String> = result.theta.iter().map(|x| x.to_string()).collect();
    let names = if two_d { ["theta", "phi"].as_slice() } else { ["theta"].as_slice() };
    let pairs: Vec<String> = names.iter().zip(&coords).map(|(n, v)| format!("{n}={v}")).collect();
    writeln!(out, "# minimizer {} status={:?}", pairs.join(" "), result.status)
}
