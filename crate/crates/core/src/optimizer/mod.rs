//! Perimeter minimization over polyline nets under area constraints.
//!
//! The merit function is the augmented Lagrangian
//! `P − Σ λ_r c_r + μ/2 Σ c_r²` with `c_r` the area residuals. The inner
//! loop is L-BFGS on the product of spheres; the outer loop updates
//! `λ ← λ − μ c` and grows `μ` when the residual stalls. At a stationary
//! point `∇P = Σ λ_r ∇A_r`, so `λ` are the region pressures.

mod dnet;
mod fit;
mod perturb;

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

pub use dnet::{DiscretizedNet, PolyEdge, PolyFace, Residual};
use dnet::{project, Variation};
pub use fit::{estimate_edge_structure, fit_circle, to_net, CircleFit, EdgeFit, EdgeStructure, FitError, VertexAngles};
pub use perturb::perturb;

use crate::geom::Vec3;
use crate::net::{EdgeId, RegionId};

/// Trial steps that turn sharper than this anywhere are rejected, which keeps
/// the polylines away from the cusps where the area formula is
/// discontinuous. Net corners turn by π/3.
pub const MAX_TURN: f64 = 0.75 * std::f64::consts::PI;

/// Floor on the preconditioner's point masses.
const MIN_MASS: f64 = 1e-12;

/// Segments shorter than this mark an edge for remeshing.
pub const COLLISION_LENGTH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub max_outer_iterations: usize,
    pub max_inner_iterations: usize,
    pub mu_initial: f64,
    pub mu_growth: f64,
    pub mu_max: f64,
    /// `μ` grows unless the residual shrinks by this factor per outer step.
    pub required_reduction: f64,
    pub armijo: f64,
    pub backtrack: f64,
    pub max_backtracks: usize,
    pub memory: usize,
    /// Cap on any single point's displacement per step, in radians.
    pub max_step: f64,
    pub tol_g: f64,
    pub tol_c: f64,
    pub seed: u64,
    pub m: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_outer_iterations: 40,
            max_inner_iterations: 2000,
            mu_initial: 1.0,
            mu_growth: 10.0,
            mu_max: 1e8,
            required_reduction: 4.0,
            armijo: 1e-4,
            backtrack: 0.5,
            max_backtracks: 40,
            memory: 12,
            max_step: 0.02,
            tol_g: 1e-7,
            tol_c: 1e-9,
            seed: 1,
            m: 16,
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
#[error("invalid optimizer setting {name} = {value}")]
pub struct ConfigError {
    pub name: &'static str,
    pub value: f64,
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("tol_g", self.tol_g),
            ("tol_c", self.tol_c),
            ("mu_initial", self.mu_initial),
            ("max_step", self.max_step),
            ("armijo", self.armijo),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError { name, value });
            }
        }
        let checks = [
            ("mu_growth", self.mu_growth, self.mu_growth >= 1.0),
            ("mu_max", self.mu_max, self.mu_max >= self.mu_initial),
            ("required_reduction", self.required_reduction, self.required_reduction >= 1.0),
            ("backtrack", self.backtrack, self.backtrack > 0.0 && self.backtrack < 1.0),
            ("armijo", self.armijo, self.armijo < 1.0),
            ("m", self.m as f64, self.m >= 2),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(ConfigError { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub outer: usize,
    /// Accepted steps so far. Every outer iteration opens with a record of
    /// its starting state.
    pub iteration: usize,
    pub perimeter: f64,
    /// Largest absolute area residual.
    pub residual: f64,
    pub grad_norm: f64,
    pub merit: f64,
    pub mu: f64,
    pub multipliers: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTrace {
    pub records: Vec<TraceRecord>,
}

impl ConvergenceTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("outer,iter,perimeter,residual,grad_norm\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{:.17e},{:.17e},{:.17e}",
                r.outer, r.iteration, r.perimeter, r.residual, r.grad_norm
            );
        }
        out
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxIterations,
    /// The line search could not decrease the merit function any further
    /// while the tolerances were still unmet.
    Stalled,
    /// Some polyline segment shrank below [`COLLISION_LENGTH`].
    Collision,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::MaxIterations => "max_iterations",
            RunStatus::Stalled => "stalled",
            RunStatus::Collision => "collision",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimized {
    pub net: DiscretizedNet,
    pub trace: ConvergenceTrace,
    pub status: RunStatus,
    /// Final multipliers shifted so the smallest is 0.
    pub pressures: BTreeMap<RegionId, f64>,
    pub flagged_edges: Vec<EdgeId>,
    pub iterations: usize,
    pub grad_norm: f64,
    pub residual: f64,
}

impl Optimized {
    pub fn converged(&self) -> bool {
        self.status == RunStatus::Converged
    }

    pub fn perimeter(&self) -> f64 {
        self.net.objective()
    }
}

fn merit_of(v: &Variation, lambda: &[f64], mu: f64) -> f64 {
    let mut s = dnet::Sum::default();
    s.add(v.perimeter);
    for (c, l) in v.residuals.iter().zip(lambda) {
        s.add(-l * c);
        s.add(0.5 * mu * c * c);
    }
    s.value()
}

fn gradient_of(v: &Variation, lambda: &[f64], mu: f64) -> Vec<Vec3> {
    let mut g = v.length_grad.clone();
    for ((grad, c), l) in v.area_grads.iter().zip(&v.residuals).zip(lambda) {
        let w = l - mu * c;
        for (gi, ai) in g.iter_mut().zip(grad) {
            *gi -= w * ai;
        }
    }
    g
}

/// Augmented-Lagrangian merit at `dnet` for the given multipliers, in
/// region order.
pub fn merit(dnet: &DiscretizedNet, multipliers: &[f64], mu: f64) -> f64 {
    merit_of(&dnet.first_variation(), multipliers, mu)
}

/// Gradient of [`merit`] at every point, projected to the tangent planes.
/// Vertex points collect the contributions of all their edges.
pub fn gradient(dnet: &DiscretizedNet, multipliers: &[f64], mu: f64) -> Vec<Vec3> {
    gradient_of(&dnet.first_variation(), multipliers, mu)
}

pub fn field_norm(v: &[Vec3]) -> f64 {
    dot(v, v).sqrt()
}

fn dot(a: &[Vec3], b: &[Vec3]) -> f64 {
    let mut s = dnet::Sum::default();
    for (x, y) in a.iter().zip(b) {
        s.add(x.dot(y));
    }
    s.value()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Least-squares multipliers for `∇P ≈ Σ λ_r ∇A_r`. Areas always sum to
/// 4π, so the last multiplier is pinned at 0.
pub fn initial_multipliers(dnet: &DiscretizedNet) -> Vec<f64> {
    let v = dnet.first_variation();
    let regions = v.area_grads.len();
    if regions < 2 {
        return vec![0.0; regions];
    }
    let rows = 3 * v.length_grad.len();
    let a = DMatrix::from_fn(rows, regions - 1, |i, j| v.area_grads[j][i / 3][i % 3]);
    let b = DVector::from_fn(rows, |i, _| v.length_grad[i / 3][i % 3]);
    let mut lambda: Vec<f64> = match a.svd(true, true).solve(&b, 1e-14) {
        Ok(x) => x.iter().copied().collect(),
        Err(_) => vec![0.0; regions - 1],
    };
    lambda.push(0.0);
    lambda
}

fn normalized_pressures(dnet: &DiscretizedNet, lambda: &[f64]) -> BTreeMap<RegionId, f64> {
    let low = lambda.iter().copied().fold(f64::INFINITY, f64::min);
    dnet.regions().iter().zip(lambda).map(|((id, _), l)| (*id, l - low)).collect()
}

struct State {
    net: DiscretizedNet,
    variation: Variation,
    merit: f64,
    grad: Vec<Vec3>,
}

impl State {
    fn new(net: DiscretizedNet, lambda: &[f64], mu: f64) -> Self {
        let variation = net.first_variation();
        Self {
            merit: merit_of(&variation, lambda, mu),
            grad: gradient_of(&variation, lambda, mu),
            variation,
            net,
        }
    }

    fn residual(&self) -> f64 {
        max_abs(&self.variation.residuals)
    }

    fn record(&self, outer: usize, iteration: usize, lambda: &[f64], mu: f64) -> TraceRecord {
        TraceRecord {
            outer,
            iteration,
            perimeter: self.variation.perimeter,
            residual: self.residual(),
            grad_norm: field_norm(&self.grad),
            merit: self.merit,
            mu,
            multipliers: lambda.to_vec(),
        }
    }
}

enum InnerEnd {
    Converged,
    Stalled,
    MaxIterations,
}

/// `-H g` from the L-BFGS two-loop recursion. The initial inverse Hessian
/// divides by the length each point carries, so a uniform pressure moves a
/// curve at uniform normal speed however its points are spaced.
fn lbfgs_direction(grad: &[Vec3], masses: &[f64], history: &VecDeque<(Vec<Vec3>, Vec<Vec3>, f64)>) -> Vec<Vec3> {
    let mut q = grad.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    let precondition = |v: &[Vec3]| -> Vec<Vec3> { v.iter().zip(masses).map(|(x, m)| x / m.max(MIN_MASS)).collect() };
    let mut r = precondition(&q);
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, &precondition(y));
        r.iter_mut().for_each(|ri| *ri *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &r);
        for (ri, si) in r.iter_mut().zip(s) {
            *ri += (a - b) * si;
        }
    }
    r.iter().map(|x| -x).collect()
}

fn retract(net: &DiscretizedNet, dir: &[Vec3], t: f64) -> DiscretizedNet {
    net.with_points(net.points().iter().zip(dir).map(|(p, d)| p + t * d).collect())
}

fn inner_loop(
    state: &mut State,
    lambda: &[f64],
    mu: f64,
    cfg: &OptimizerConfig,
    outer: usize,
    iterations: &mut usize,
    trace: &mut ConvergenceTrace,
) -> InnerEnd {
    let mut history: VecDeque<(Vec<Vec3>, Vec<Vec3>, f64)> = VecDeque::new();
    for _ in 0..cfg.max_inner_iterations {
        if field_norm(&state.grad) < cfg.tol_g {
            return InnerEnd::Converged;
        }
        let masses = &state.variation.masses;
        let mut dir = lbfgs_direction(&state.grad, masses, &history);
        let mut slope = dot(&state.grad, &dir);
        if slope >= 0.0 {
            history.clear();
            dir = lbfgs_direction(&state.grad, masses, &history);
            slope = dot(&state.grad, &dir);
        }
        let longest = dir.iter().map(|d| d.norm()).fold(0.0, f64::max);
        let mut t = if longest > cfg.max_step { cfg.max_step / longest } else { 1.0 };
        let mut accepted = None;
        for _ in 0..cfg.max_backtracks {
            let trial = State::new(retract(&state.net, &dir, t), lambda, mu);
            if trial.variation.max_turn < MAX_TURN && trial.merit <= state.merit + cfg.armijo * t * slope {
                accepted = Some(trial);
                break;
            }
            t *= cfg.backtrack;
        }
        let Some(next) = accepted else {
            return InnerEnd::Stalled;
        };
        let pts = next.net.points();
        let s: Vec<Vec3> = pts
            .iter()
            .zip(state.net.points())
            .map(|(p, q)| project(p, &(p - q)))
            .collect();
        let y: Vec<Vec3> = next
            .grad
            .iter()
            .zip(&state.grad)
            .zip(pts)
            .map(|((gn, go), p)| gn - project(p, go))
            .collect();
        for (hs, hy, _) in history.iter_mut() {
            for ((a, b), p) in hs.iter_mut().zip(hy.iter_mut()).zip(pts) {
                *a = project(p, a);
                *b = project(p, b);
            }
        }
        let sy = dot(&s, &y);
        if cfg.memory > 0 && sy > 1e-12 * field_norm(&s) * field_norm(&y) {
            if history.len() == cfg.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        *state = next;
        *iterations += 1;
        trace.records.push(state.record(outer, *iterations, lambda, mu));
    }
    InnerEnd::MaxIterations
}

/// Runs the augmented-Lagrangian method from `initial`. When the run does not
/// converge the iterate closest to the tolerances is returned.
pub fn minimize(initial: &DiscretizedNet, cfg: &OptimizerConfig) -> Result<Optimized, ConfigError> {
    cfg.validate()?;
    let mut lambda = initial_multipliers(initial);
    let mut mu = cfg.mu_initial;
    let mut state = State::new(initial.clone(), &lambda, mu);
    let mut trace = ConvergenceTrace::default();
    let mut iterations = 0;
    let mut previous_residual = f64::INFINITY;
    let mut status = RunStatus::MaxIterations;
    let score = |s: &State| (s.residual() / cfg.tol_c).max(field_norm(&s.grad) / cfg.tol_g);
    let mut best: Option<(f64, State, Vec<f64>)> = None;

    for outer in 0..cfg.max_outer_iterations {
        trace.records.push(state.record(outer, iterations, &lambda, mu));
        if state.residual() < cfg.tol_c && field_norm(&state.grad) < cfg.tol_g {
            status = RunStatus::Converged;
            break;
        }
        let before = iterations;
        let end = inner_loop(&mut state, &lambda, mu, cfg, outer, &mut iterations, &mut trace);
        log::debug!(
            "outer {outer}: {} steps, perimeter {:.12}, residual {:.3e}, gradient {:.3e}, mu {mu:.1e}",
            iterations - before,
            state.variation.perimeter,
            state.residual(),
            field_norm(&state.grad)
        );
        let flagged = state.net.collapsed_edges(COLLISION_LENGTH);
        if !flagged.is_empty() {
            status = RunStatus::Collision;
            break;
        }
        let residual = state.residual();
        let stuck = matches!(end, InnerEnd::Stalled) && iterations == before;
        for (l, c) in lambda.iter_mut().zip(&state.variation.residuals) {
            *l -= mu * c;
        }
        if residual > previous_residual / cfg.required_reduction {
            mu = (mu * cfg.mu_growth).min(cfg.mu_max);
        }
        previous_residual = residual;
        state = State::new(state.net, &lambda, mu);
        let s = score(&state);
        if best.as_ref().is_none_or(|(b, _, _)| s < *b) {
            best = Some((s, State::new(state.net.clone(), &lambda, mu), lambda.clone()));
        }
        if stuck && residual < cfg.tol_c && field_norm(&state.grad) >= cfg.tol_g {
            status = RunStatus::Stalled;
            break;
        }
    }
    if status == RunStatus::MaxIterations && state.residual() < cfg.tol_c && field_norm(&state.grad) < cfg.tol_g {
        status = RunStatus::Converged;
    }
    if matches!(status, RunStatus::MaxIterations | RunStatus::Stalled) {
        if let Some((s, b, l)) = best {
            if s < score(&state) {
                state = b;
                lambda = l;
            }
        }
    }
    Ok(Optimized {
        pressures: normalized_pressures(&state.net, &lambda),
        flagged_edges: state.net.collapsed_edges(COLLISION_LENGTH),
        grad_norm: field_norm(&state.grad),
        residual: state.residual(),
        net: state.net,
        trace,
        status,
        iterations,
    })
}
