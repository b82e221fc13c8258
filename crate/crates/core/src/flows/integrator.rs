//! Dormand–Prince 5(4) with PI step-size control, specialised to curvature
//! flows: the right-hand side also reports the curvature so residuals come
//! for free from the FSAL stage, and stages leaving the positive orthant
//! trigger a halved retry.

use super::{residual, FlowOptions, FlowTrace, Method, Sample, Termination};
use crate::curvature::segment_energy_raw;
use crate::triangulation::Triangulation;

pub(crate) struct Eval {
    pub deriv: Vec<f64>,
    pub k: Vec<f64>,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - 0.75 * BETA;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

enum Attempt {
    Accepted { y: Vec<f64>, eval: Eval, err: f64 },
    Rejected { err: f64 },
    NotPositive,
}

fn attempt(y: &[f64], f0: &Eval, h: f64, floor: f64, rtol: f64, atol: f64, field: &dyn Fn(&[f64]) -> Eval) -> Attempt {
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    k.push(f0.deriv.clone());
    let mut last = None;
    for s in 1..7 {
        debug_assert!(C[s] > 0.0);
        let point: Vec<f64> = (0..n)
            .map(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>())
            .collect();
        if point.iter().any(|&r| r <= floor) {
            return Attempt::NotPositive;
        }
        let eval = field(&point);
        k.push(eval.deriv.clone());
        if s == 6 {
            last = Some((point, eval));
        }
    }
    let (y_new, eval) = last.expect("seven stages");
    let mut sum = 0.0;
    for i in 0..n {
        let err_i = h * (0..7).map(|s| E[s] * k[s][i]).sum::<f64>();
        let scale = atol + rtol * y[i].abs().max(y_new[i].abs());
        sum += (err_i / scale).powi(2);
    }
    let err = (sum / n as f64).sqrt();
    if err <= 1.0 {
        Attempt::Accepted { y: y_new, eval, err }
    } else {
        Attempt::Rejected { err }
    }
}

pub(crate) fn integrate(
    tri: &Triangulation,
    opts: &FlowOptions,
    method: Method,
    field: &dyn Fn(&[f64]) -> Eval,
) -> FlowTrace {
    let ctl = opts.step;
    let target = &opts.k_target;
    let mut y = opts.r0.as_slice().to_vec();
    let mut f = field(&y);
    let mut t = 0.0;
    let mut energy = 0.0;
    let mut trace = FlowTrace::start(
        method,
        Sample { t, step: 0.0, residual: residual(&f.k, target), r: y.clone(), k: f.k.clone(), energy },
    );
    let mut h = ctl.initial_step.min(ctl.max_step);
    let mut err_prev: f64 = 1e-4;
    let mut accepted = 0usize;

    loop {
        if trace.last().residual <= opts.tol {
            return trace.finish(Termination::Converged);
        }
        if t >= opts.max_time {
            return trace.finish(Termination::MaxTime);
        }
        if accepted >= opts.max_iters {
            return trace.finish(Termination::MaxIters);
        }
        let mut positivity_hit = false;
        let step = loop {
            if h < ctl.min_step {
                let why = if positivity_hit { Termination::LeftPositiveOrthant } else { Termination::StepUnderflow };
                return trace.finish(why);
            }
            let h_try = h.min(opts.max_time - t);
            match attempt(&y, &f, h_try, opts.positivity_floor, ctl.rtol, ctl.atol, field) {
                Attempt::Accepted { y, eval, err } => break (h_try, y, eval, err),
                Attempt::Rejected { err } => {
                    positivity_hit = false;
                    h = h_try * (ctl.safety * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
                }
                Attempt::NotPositive => {
                    positivity_hit = true;
                    h = 0.5 * h_try;
                }
            }
        };
        let (h_used, y_new, f_new, err) = step;
        energy += segment_energy_raw(tri, &y, &y_new, target);
        t += h_used;
        accepted += 1;
        trace.push(Sample {
            t,
            step: h_used,
            residual: residual(&f_new.k, target),
            r: y_new.clone(),
            k: f_new.k.clone(),
            energy,
        });
        let err = err.max(1e-10);
        let factor = (ctl.safety * err.powf(-ALPHA) * err_prev.powf(BETA)).clamp(MIN_FACTOR, MAX_FACTOR);
        err_prev = err;
        h = (h_used * factor).min(ctl.max_step);
        y = y_new;
        f = f_new;
    }
}
