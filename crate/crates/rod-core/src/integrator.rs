//! Explicit second-order stepper for the rolling Cosserat rod.
//!
//! Each step is a leapfrog predictor for the free rod followed by a
//! per-node 2x2 multiplier solve that enforces the discrete rolling
//! constraints exactly, then the corrector that applies the reaction
//! forces. The unconstrained stepper is kept alongside for comparison
//! runs and Noether checks.

use crate::error::Error;
use crate::field::{FieldLevel, InitialData, StatePair};
use crate::grid::Grid;
use crate::params::RodParameters;
use crate::stencil::{delta2, delta4, diff1_central};

/// Per-node reaction-force strengths produced by a constrained step.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

/// Outcome of one constrained step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub next: FieldLevel,
    pub multipliers: Multipliers,
    /// Max over nodes and over both constraints of the absolute residual
    /// of the discrete rolling constraints on (prev, next).
    pub constraint_residual_max: f64,
}

/// Per-node components of the discrete constraint one-forms:
/// a_i = R (y_{i+1} - y_{i-1}) / 2k and b_i = R (x_{i+1} - x_{i-1}) / 2k.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCoefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Relative tolerance on the discrete constraint residual of a
/// constrained step; exceeding it means the multiplier solve is broken.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Leapfrog prediction of the next level with the multipliers set to zero:
/// X_i = 2 x_{n,i} - x_{n-1,i} - (h^2 K / rho k^4) Delta^4 x_{n,i}, same for y,
/// and Theta_i = 2 th_{n,i} - th_{n-1,i} + (beta h^2 / alpha k^2) Delta^2 th_{n,i}.
pub fn free_predictor(state: &StatePair, params: &RodParameters, grid: &Grid) -> FieldLevel {
    let n = state.n_nodes();
    let h2 = state.dt * state.dt;
    let k2 = grid.spacing() * grid.spacing();
    let bend = h2 * params.bend_k / (params.rho * k2 * k2);
    let twist = params.beta * h2 / (params.alpha * k2);
    let ck = grid.centerline_ghost();
    let tk = grid.torsion_ghost();

    let mut next = FieldLevel::zeros(state.curr.time_index + 1, n);
    for i in 0..n {
        next.x[i] = 2.0 * state.curr.x[i] - state.prev.x[i] - bend * delta4(&state.curr.x, i, grid, ck);
        next.y[i] = 2.0 * state.curr.y[i] - state.prev.y[i] - bend * delta4(&state.curr.y, i, grid, ck);
        next.theta[i] =
            2.0 * state.curr.theta[i] - state.prev.theta[i] + twist * delta2(&state.curr.theta, i, grid, tk);
    }
    next
}

/// Components of the discrete Chetaev one-forms at every node of `level`.
pub fn constraint_coefficients(
    level: &FieldLevel,
    params: &RodParameters,
    grid: &Grid,
) -> ConstraintCoefficients {
    let n = level.n_nodes();
    let ck = grid.centerline_ghost();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        a[i] = params.radius * diff1_central(&level.y, i, grid, ck);
        b[i] = params.radius * diff1_central(&level.x, i, grid, ck);
    }
    ConstraintCoefficients { a, b }
}

/// Closed-form per-node solve for the reaction-force strengths.
///
/// Substituting the corrector into the discrete constraints decouples the
/// system into one symmetric positive definite 2x2 solve per node:
/// det M_i = (h^2/rho)^2 + (h^2/rho)(h^2/alpha)(a_i^2 + b_i^2) > 0.
pub fn solve_multipliers(
    predictor: &FieldLevel,
    state: &StatePair,
    coeffs: &ConstraintCoefficients,
    params: &RodParameters,
) -> Multipliers {
    let n = state.n_nodes();
    let h2 = state.dt * state.dt;
    let inv_rho = h2 / params.rho;
    let inv_alpha = h2 / params.alpha;
    let mut lambda = vec![0.0; n];
    let mut mu = vec![0.0; n];
    for i in 0..n {
        let (a, b) = (coeffs.a[i], coeffs.b[i]);
        let dx = predictor.x[i] - state.prev.x[i];
        let dy = predictor.y[i] - state.prev.y[i];
        let dth = predictor.theta[i] - state.prev.theta[i];
        let m11 = inv_rho + inv_alpha * a * a;
        let m12 = -inv_alpha * a * b;
        let m22 = inv_rho + inv_alpha * b * b;
        let r1 = -dx - a * dth;
        let r2 = -dy + b * dth;
        let det = m11 * m22 - m12 * m12;
        lambda[i] = (m22 * r1 - m12 * r2) / det;
        mu[i] = (m11 * r2 - m12 * r1) / det;
    }
    Multipliers { lambda, mu }
}

/// One step of the nonholonomic integrator: predictor, multiplier solve,
/// corrector. The discrete constraints hold on (prev, next) up to
/// roundoff; a residual above tolerance is an internal-consistency error.
pub fn constrained_step(
    state: &StatePair,
    params: &RodParameters,
    grid: &Grid,
) -> Result<StepResult, Error> {
    let predictor = free_predictor(state, params, grid);
    let coeffs = constraint_coefficients(&state.curr, params, grid);
    let multipliers = solve_multipliers(&predictor, state, &coeffs, params);

    let n = state.n_nodes();
    let h2 = state.dt * state.dt;
    let mut next = predictor;
    for i in 0..n {
        let (l, m) = (multipliers.lambda[i], multipliers.mu[i]);
        next.x[i] += h2 / params.rho * l;
        next.y[i] += h2 / params.rho * m;
        next.theta[i] += h2 / params.alpha * (coeffs.a[i] * l - coeffs.b[i] * m);
    }

    let mut residual: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..n {
        let dth = next.theta[i] - state.prev.theta[i];
        let c1 = next.x[i] - state.prev.x[i] + coeffs.a[i] * dth;
        let c2 = next.y[i] - state.prev.y[i] - coeffs.b[i] * dth;
        residual = residual.max(c1.abs()).max(c2.abs());
        scale = scale
            .max(next.x[i].abs())
            .max(next.y[i].abs())
            .max(params.radius * next.theta[i].abs());
    }
    let tolerance = CONSTRAINT_TOL * scale;
    if !(residual <= tolerance) {
        return Err(Error::ConstraintResidual {
            residual,
            tolerance,
        });
    }
    Ok(StepResult {
        next,
        multipliers,
        constraint_residual_max: residual,
    })
}

/// One step of the unconstrained leapfrog (the free rod).
pub fn free_step(state: &StatePair, params: &RodParameters, grid: &Grid) -> FieldLevel {
    free_predictor(state, params, grid)
}

/// Classical explicit-beam time step bound, h_max = k^2 sqrt(rho / K) / 2.
/// Returns +inf when the bending stiffness is zero.
pub fn stability_limit(params: &RodParameters, grid: &Grid) -> f64 {
    if params.bend_k == 0.0 {
        return f64::INFINITY;
    }
    let k2 = grid.spacing() * grid.spacing();
    0.5 * k2 * (params.rho / params.bend_k).sqrt()
}

/// Bootstrap the two-level state from positions and velocities at t = 0.
///
/// Level 1 is the constrained Taylor half-step phi_0 + h v_0 + (h^2/2) a_0,
/// where a_0 is the constrained acceleration recovered from one
/// constrained step against the virtual level phi_{-1} = phi_1^free - 2 h v_0.
pub fn build_initial_pair(
    data: &InitialData,
    params: &RodParameters,
    grid: &Grid,
    dt: f64,
) -> Result<StatePair, Error> {
    data.validate()?;
    if data.n_nodes() != grid.n_nodes() {
        return Err(Error::InvalidField(format!(
            "initial data has {} nodes, grid has {}",
            data.n_nodes(),
            grid.n_nodes()
        )));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidField(format!("dt must be positive, got {dt}")));
    }

    let n = grid.n_nodes();
    let ck = grid.centerline_ghost();
    let tk = grid.torsion_ghost();
    let k2 = grid.spacing() * grid.spacing();
    let h2 = dt * dt;

    // Free elastic accelerations at t = 0.
    let accel = |i: usize| -> [f64; 3] {
        let ax = -params.bend_k / params.rho * delta4(&data.x0, i, grid, ck) / (k2 * k2);
        let ay = -params.bend_k / params.rho * delta4(&data.y0, i, grid, ck) / (k2 * k2);
        let ath = params.beta / params.alpha * delta2(&data.theta0, i, grid, tk) / k2;
        [ax, ay, ath]
    };

    let level0 = FieldLevel::new(0, data.x0.clone(), data.y0.clone(), data.theta0.clone())?;

    // Virtual previous level: phi_{-1} = phi_1^free - 2 h v_0
    //                                  = phi_0 - h v_0 + (h^2/2) a_0^free.
    let mut virt = FieldLevel::zeros(-1, n);
    for i in 0..n {
        let [ax, ay, ath] = accel(i);
        virt.x[i] = data.x0[i] - dt * data.vx0[i] + 0.5 * h2 * ax;
        virt.y[i] = data.y0[i] - dt * data.vy0[i] + 0.5 * h2 * ay;
        virt.theta[i] = data.theta0[i] - dt * data.vtheta0[i] + 0.5 * h2 * ath;
    }

    let seed = StatePair::new(virt, level0.clone(), dt)?;
    let step = constrained_step(&seed, params, grid)?;

    // Constrained acceleration from the central second difference, then
    // the Taylor half-step to level 1.
    let mut level1 = FieldLevel::zeros(1, n);
    for i in 0..n {
        let a0x = (step.next.x[i] - 2.0 * seed.curr.x[i] + seed.prev.x[i]) / h2;
        let a0y = (step.next.y[i] - 2.0 * seed.curr.y[i] + seed.prev.y[i]) / h2;
        let a0th = (step.next.theta[i] - 2.0 * seed.curr.theta[i] + seed.prev.theta[i]) / h2;
        level1.x[i] = data.x0[i] + dt * data.vx0[i] + 0.5 * h2 * a0x;
        level1.y[i] = data.y0[i] + dt * data.vy0[i] + 0.5 * h2 * a0y;
        level1.theta[i] = data.theta0[i] + dt * data.vtheta0[i] + 0.5 * h2 * a0th;
    }

    StatePair::new(level0, level1, dt)
}
