use nalgebra::{Cholesky, DVector};
use serde::{Deserialize, Serialize};

use super::{residual, FlowOptions, FlowTrace, Method, Sample, Termination};
use crate::curvature::{curvature_and_jacobian_raw, scalar_curvature_raw, segment_energy_raw, PackingMetric};
use crate::error::{Error, Result};
use crate::sparse::SymmetricSparse;
use crate::triangulation::Triangulation;

/// Above this many vertices `Auto` switches to conjugate gradients.
pub const DENSE_LIMIT: usize = 200;

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
const BOUNDARY_FRACTION: f64 = 0.995;
const STAGNATION_FACTOR: f64 = 1e3;
/// Largest change of any radius in one iteration.
const MAX_STEP: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearSolver {
    #[default]
    Auto,
    Dense,
    SparseCg,
}

/// Solve `(-Λ) p = rhs`.
fn solve(lambda: &SymmetricSparse, rhs: &[f64], kind: LinearSolver) -> Option<Vec<f64>> {
    let kind = match kind {
        LinearSolver::Auto if lambda.dim() > DENSE_LIMIT => LinearSolver::SparseCg,
        LinearSolver::Auto => LinearSolver::Dense,
        k => k,
    };
    match kind {
        LinearSolver::SparseCg => conjugate_gradient(lambda, rhs),
        _ => {
            let chol = Cholesky::new(-lambda.to_dense())?;
            let p = chol.solve(&DVector::from_column_slice(rhs));
            Some(p.iter().copied().collect())
        }
    }
}

/// Jacobi-preconditioned CG on `-Λ`.
fn conjugate_gradient(lambda: &SymmetricSparse, b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let apply = |x: &[f64]| -> Vec<f64> { lambda.mul_vec(x).into_iter().map(|v| -v).collect() };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let inv_diag: Vec<f64> = (0..n).map(|i| -1.0 / lambda.get(i, i)).collect();
    if inv_diag.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return None;
    }
    let b_norm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Some(x);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for _ in 0..(10 * n).max(50) {
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return None;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if dot(&r, &r).sqrt() <= 1e-15 * b_norm {
            return Some(x);
        }
        z = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Some(x)
}

/// Damped Newton descent on the curvature energy, recording every iterate.
/// `t` counts iterations and `step` holds the accepted damping factor.
pub fn newton_trace(tri: &Triangulation, opts: &FlowOptions) -> Result<FlowTrace> {
    opts.validate(tri)?;
    let target = &opts.k_target;
    let floor = opts.positivity_floor;
    let mut r = opts.r0.as_slice().to_vec();
    let (mut k, mut lambda) = curvature_and_jacobian_raw(tri, &r);
    let mut res = residual(&k, target);
    let mut energy = 0.0;
    let mut trace = FlowTrace::start(
        Method::Newton,
        Sample { t: 0.0, step: 0.0, residual: res, r: r.clone(), k: k.clone(), energy },
    );
    let mut iter = 0usize;
    loop {
        if res <= opts.tol {
            return Ok(trace.finish(Termination::Converged));
        }
        if iter >= opts.max_iters {
            return Ok(trace.finish(Termination::MaxIters));
        }
        if iter as f64 >= opts.max_time {
            return Ok(trace.finish(Termination::MaxTime));
        }
        let diff: Vec<f64> = k.iter().zip(target).map(|(a, b)| a - b).collect();
        let Some(p) = solve(&lambda, &diff, opts.linear_solver) else {
            return Ok(trace.finish(Termination::LineSearchFailure));
        };
        // Directional derivative of the energy, whose gradient is -(K - K̄).
        let slope: f64 = -diff.iter().zip(&p).map(|(d, q)| d * q).sum::<f64>();
        if !(slope < 0.0) {
            return Ok(trace.finish(Termination::LineSearchFailure));
        }
        let p_max = p.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let alpha_cap = (MAX_STEP / p_max).min(1.0);
        let alpha_boundary = r
            .iter()
            .zip(&p)
            .filter(|(_, &pi)| pi < 0.0)
            .map(|(ri, pi)| BOUNDARY_FRACTION * (ri - floor) / -pi)
            .fold(f64::INFINITY, f64::min);
        let truncated = alpha_boundary < alpha_cap;
        let alpha_max = alpha_cap.min(alpha_boundary);

        let mut alpha = alpha_max;
        let mut accepted = None;
        let mut fallback = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = r.iter().zip(&p).map(|(a, b)| a + alpha * b).collect();
            if trial.iter().all(|&x| x > floor) {
                let de = segment_energy_raw(tri, &r, &trial, target);
                if de <= ARMIJO_C1 * alpha * slope {
                    accepted = Some((alpha, trial, de));
                    break;
                }
                if fallback.is_none() {
                    let k_trial = scalar_curvature_raw(tri, &trial);
                    if residual(&k_trial, target) < res {
                        fallback = Some((alpha, trial, de));
                    }
                }
            }
            alpha *= 0.5;
        }
        let Some((alpha, r_new, de)) = accepted.or(fallback) else {
            return Ok(trace.finish(Termination::LineSearchFailure));
        };
        iter += 1;
        energy += de;
        r = r_new;
        (k, lambda) = curvature_and_jacobian_raw(tri, &r);
        res = residual(&k, target);
        trace.push(Sample { t: iter as f64, step: alpha, residual: res, r: r.clone(), k: k.clone(), energy });
        let r_min = r.iter().copied().fold(f64::INFINITY, f64::min);
        if truncated && alpha == alpha_max && r_min <= STAGNATION_FACTOR * floor && res > opts.tol {
            return Ok(trace.finish(Termination::LeftPositiveOrthant));
        }
    }
}

/// Run [`newton_trace`] and return the limit metric, or a
/// [`Error::NotConverged`] carrying the final state.
pub fn newton_solve(tri: &Triangulation, opts: &FlowOptions) -> Result<PackingMetric> {
    let trace = newton_trace(tri, opts)?;
    if trace.converged() {
        Ok(trace.final_metric())
    } else {
        let last = trace.last();
        Err(Error::NotConverged {
            termination: trace.termination.to_string(),
            residual: last.residual,
            r: last.r.clone(),
        })
    }
}
