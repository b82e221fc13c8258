//! Prescribed-curvature solvers.
//!
//! * combinatorial Ricci flow `dr/dt = K - K̄`,
//! * combinatorial Calabi flow `dr/dt = -Λ(K - K̄)`,
//! * damped Newton descent on the convex energy `G̃` whose gradient is
//!   `-(K - K̄)` and whose Hessian is `-Λ`.
//!
//! Both flows decrease `G̃`; the trace records its value relative to the
//! starting metric so monotonicity can be inspected.

mod bounds;
mod integrator;
mod newton;

use serde::{Deserialize, Serialize};

use crate::curvature::{self, PackingMetric};
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

pub use bounds::{bounds, regime, Bounds, Regime};
pub use newton::{newton_solve, newton_trace, LinearSolver};

/// Residuals at or above this are excluded from rate estimation.
pub const RATE_RESIDUAL_CEILING: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ricci,
    Calabi,
    Newton,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Ricci => "ricci",
            Method::Calabi => "calabi",
            Method::Newton => "newton",
        })
    }
}

/// Adaptive step-size parameters for the flow integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub safety: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { initial_step: 1e-2, min_step: 1e-14, max_step: 1e3, safety: 0.9, rtol: 1e-12, atol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowOptions {
    pub method: Method,
    pub k_target: Vec<f64>,
    pub r0: PackingMetric,
    /// Threshold on `‖K - K̄‖∞`.
    pub tol: f64,
    pub max_time: f64,
    /// Accepted steps for the flows, iterations for Newton.
    pub max_iters: usize,
    pub step: StepControl,
    /// Radii must stay strictly above this.
    pub positivity_floor: f64,
    pub linear_solver: LinearSolver,
}

impl FlowOptions {
    pub fn new(method: Method, r0: PackingMetric, k_target: Vec<f64>) -> Self {
        FlowOptions {
            method,
            k_target,
            r0,
            tol: 1e-10,
            max_time: 1e7,
            max_iters: match method {
                Method::Newton => 200,
                _ => 1_000_000,
            },
            step: StepControl::default(),
            positivity_floor: 1e-8,
            linear_solver: LinearSolver::Auto,
        }
    }

    fn validate(&self, tri: &Triangulation) -> Result<()> {
        let n = tri.num_vertices();
        if self.r0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.r0.len() });
        }
        if self.k_target.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.k_target.len() });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidOption(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.positivity_floor > 0.0) {
            return Err(Error::InvalidOption(format!(
                "positivity floor must be positive, got {}",
                self.positivity_floor
            )));
        }
        if self.k_target.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidOption("target curvature must be finite".into()));
        }
        if let Some((index, &value)) =
            self.r0.as_slice().iter().enumerate().find(|(_, &r)| r <= self.positivity_floor)
        {
            return Err(Error::InvalidOption(format!(
                "initial radius {index} = {value} is not above the positivity floor {}",
                self.positivity_floor
            )));
        }
        let s = &self.step;
        if !(s.initial_step > 0.0 && s.min_step > 0.0 && s.max_step >= s.min_step && s.rtol > 0.0 && s.atol >= 0.0)
            || !(s.safety > 0.0 && s.safety <= 1.0)
        {
            return Err(Error::InvalidOption(format!("inconsistent step control {s:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxTime,
    MaxIters,
    StepUnderflow,
    LeftPositiveOrthant,
    LineSearchFailure,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Termination::Converged => "converged",
            Termination::MaxTime => "max_time",
            Termination::MaxIters => "max_iters",
            Termination::StepUnderflow => "step_underflow",
            Termination::LeftPositiveOrthant => "left_positive_orthant",
            Termination::LineSearchFailure => "line_search_failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    /// Flow time, or iteration count for Newton.
    pub t: f64,
    /// Step that produced this sample (0 for the initial one).
    pub step: f64,
    pub residual: f64,
    pub r: Vec<f64>,
    pub k: Vec<f64>,
    /// `G̃(r) - G̃(r0)`.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTrace {
    pub method: Method,
    pub samples: Vec<Sample>,
    pub termination: Termination,
    /// Slope of `ln ‖K - K̄‖∞` against `t` over the asymptotic tail.
    pub rate_estimate: Option<f64>,
    /// Running extremes of all radii over the run.
    pub max_radius: f64,
    pub min_radius: f64,
    /// Largest single-step increase of the energy (0 when monotone).
    pub max_energy_increase: f64,
}

impl FlowTrace {
    fn start(method: Method, sample: Sample) -> Self {
        let max_radius = sample.r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_radius = sample.r.iter().copied().fold(f64::INFINITY, f64::min);
        FlowTrace {
            method,
            samples: vec![sample],
            termination: Termination::MaxIters,
            rate_estimate: None,
            max_radius,
            min_radius,
            max_energy_increase: 0.0,
        }
    }

    fn push(&mut self, sample: Sample) {
        let prev = self.last().energy;
        self.max_energy_increase = self.max_energy_increase.max(sample.energy - prev);
        for &r in &sample.r {
            self.max_radius = self.max_radius.max(r);
            self.min_radius = self.min_radius.min(r);
        }
        self.samples.push(sample);
    }

    fn finish(mut self, termination: Termination) -> Self {
        self.termination = termination;
        self.rate_estimate = rate_estimate(&self.samples);
        self
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trace always holds the initial sample")
    }

    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn final_residual(&self) -> f64 {
        self.last().residual
    }

    pub fn final_metric(&self) -> PackingMetric {
        PackingMetric::new(self.last().r.clone()).expect("trace radii stay positive")
    }
}

pub(crate) fn residual(k: &[f64], k_target: &[f64]) -> f64 {
    k.iter().zip(k_target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Least-squares slope of `ln residual` against `t` over the trailing half of
/// the samples whose residual is below [`RATE_RESIDUAL_CEILING`].
pub fn rate_estimate(samples: &[Sample]) -> Option<f64> {
    let tail: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.residual > 0.0 && s.residual < RATE_RESIDUAL_CEILING)
        .map(|s| (s.t, s.residual.ln()))
        .collect();
    let tail = &tail[tail.len() / 2..];
    if tail.len() < 2 {
        return None;
    }
    let n = tail.len() as f64;
    let mean_t = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = tail.iter().map(|p| (p.0 - mean_t).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = tail.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_y)).sum();
    Some(sxy / sxx)
}

/// Combinatorial Ricci flow `dr_i/dt = K_i - K̄_i`.
pub fn ricci_flow(tri: &Triangulation, opts: &FlowOptions) -> Result<FlowTrace> {
    opts.validate(tri)?;
    let target = &opts.k_target;
    let field = |r: &[f64]| {
        let k = curvature::scalar_curvature_raw(tri, r);
        let deriv = k.iter().zip(target).map(|(a, b)| a - b).collect();
        integrator::Eval { deriv, k }
    };
    Ok(integrator::integrate(tri, opts, Method::Ricci, &field))
}

/// Combinatorial Calabi flow `dr/dt = -Λ(K - K̄)` with `Λ = ∂K/∂r`.
pub fn calabi_flow(tri: &Triangulation, opts: &FlowOptions) -> Result<FlowTrace> {
    opts.validate(tri)?;
    let target = &opts.k_target;
    let field = |r: &[f64]| {
        let (k, lambda) = curvature::curvature_and_jacobian_raw(tri, r);
        let diff: Vec<f64> = k.iter().zip(target).map(|(a, b)| a - b).collect();
        let deriv = lambda.mul_vec(&diff).into_iter().map(|x| -x).collect();
        integrator::Eval { deriv, k }
    };
    Ok(integrator::integrate(tri, opts, Method::Calabi, &field))
}

/// Dispatch on `opts.method`.
pub fn run(tri: &Triangulation, opts: &FlowOptions) -> Result<FlowTrace> {
    match opts.method {
        Method::Ricci => ricci_flow(tri, opts),
        Method::Calabi => calabi_flow(tri, opts),
        Method::Newton => newton_trace(tri, opts),
    }
}
