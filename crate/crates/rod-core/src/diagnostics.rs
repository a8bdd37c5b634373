//! Conservation-law and constraint monitors.
//!
//! Velocities are the scheme's native forward differences between the
//! two stored levels; spatial derivatives use the same stencils as the
//! discrete Lagrangian. Quadrature is trapezoidal for free ends and the
//! rectangle rule on periodic meshes.

use crate::field::{FieldLevel, StatePair};
use crate::grid::{BoundaryCondition, Grid};
use crate::integrator::constraint_coefficients;
use crate::params::RodParameters;
use crate::stencil::{diff1_central, diff1_forward, diff2};

/// One row of the per-step monitor output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub step: u64,
    pub t: f64,
    pub energy: f64,
    pub px: f64,
    pub py: f64,
    pub ptheta: f64,
    pub jz: f64,
    pub c1_max: f64,
    pub c2_max: f64,
    pub stretch_min: f64,
    pub stretch_max: f64,
}

fn quadrature(grid: &Grid, density: impl Fn(usize) -> f64) -> f64 {
    let n = grid.n_nodes();
    let k = grid.spacing();
    match grid.bc() {
        BoundaryCondition::Free => {
            let mut sum = 0.5 * (density(0) + density(n - 1));
            for i in 1..n - 1 {
                sum += density(i);
            }
            sum * k
        }
        BoundaryCondition::Periodic => (0..n).map(&density).sum::<f64>() * k,
    }
}

/// Total energy of the two-level state: kinetic terms from the forward
/// velocity differences, bending and torsion from the older level.
pub fn total_energy(state: &StatePair, params: &RodParameters, grid: &Grid) -> f64 {
    let h = state.dt;
    let ck = grid.centerline_ghost();
    let tk = grid.torsion_ghost();
    quadrature(grid, |i| {
        let vx = (state.curr.x[i] - state.prev.x[i]) / h;
        let vy = (state.curr.y[i] - state.prev.y[i]) / h;
        let vth = (state.curr.theta[i] - state.prev.theta[i]) / h;
        let xss = diff2(&state.prev.x, i, grid, ck);
        let yss = diff2(&state.prev.y, i, grid, ck);
        let ths = diff1_forward(&state.prev.theta, i, grid, tk);
        0.5 * params.rho * (vx * vx + vy * vy)
            + 0.5 * params.alpha * vth * vth
            + 0.5 * params.bend_k * (xss * xss + yss * yss)
            + 0.5 * params.beta * ths * ths
    })
}

/// Total linear momentum (px, py).
pub fn linear_momentum(state: &StatePair, params: &RodParameters, grid: &Grid) -> (f64, f64) {
    let h = state.dt;
    let px = quadrature(grid, |i| {
        params.rho * (state.curr.x[i] - state.prev.x[i]) / h
    });
    let py = quadrature(grid, |i| {
        params.rho * (state.curr.y[i] - state.prev.y[i]) / h
    });
    (px, py)
}

/// Total angular momentum about the origin, midpoint positions against
/// forward-difference velocities.
pub fn angular_momentum(state: &StatePair, params: &RodParameters, grid: &Grid) -> f64 {
    let h = state.dt;
    quadrature(grid, |i| {
        let xm = 0.5 * (state.curr.x[i] + state.prev.x[i]);
        let ym = 0.5 * (state.curr.y[i] + state.prev.y[i]);
        let vx = (state.curr.x[i] - state.prev.x[i]) / h;
        let vy = (state.curr.y[i] - state.prev.y[i]) / h;
        params.rho * (xm * vy - ym * vx)
    })
}

/// Total torsional momentum.
pub fn torsional_momentum(state: &StatePair, params: &RodParameters, grid: &Grid) -> f64 {
    let h = state.dt;
    quadrature(grid, |i| {
        params.alpha * (state.curr.theta[i] - state.prev.theta[i]) / h
    })
}

/// Max absolute residual of the two discrete rolling constraints on the
/// triple (state.prev, state.curr, next).
pub fn constraint_residuals(
    state: &StatePair,
    next: &FieldLevel,
    params: &RodParameters,
    grid: &Grid,
) -> (f64, f64) {
    let coeffs = constraint_coefficients(&state.curr, params, grid);
    let mut c1_max: f64 = 0.0;
    let mut c2_max: f64 = 0.0;
    for i in 0..state.n_nodes() {
        let dth = next.theta[i] - state.prev.theta[i];
        let c1 = next.x[i] - state.prev.x[i] + coeffs.a[i] * dth;
        let c2 = next.y[i] - state.prev.y[i] - coeffs.b[i] * dth;
        c1_max = c1_max.max(c1.abs());
        c2_max = c2_max.max(c2.abs());
    }
    (c1_max, c2_max)
}

/// Extrema over the nodes of the local stretch sqrt(x'^2 + y'^2).
pub fn stretch_extrema(level: &FieldLevel, grid: &Grid) -> (f64, f64) {
    let ck = grid.centerline_ghost();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for i in 0..level.n_nodes() {
        let xs = diff1_central(&level.x, i, grid, ck);
        let ys = diff1_central(&level.y, i, grid, ck);
        let stretch = (xs * xs + ys * ys).sqrt();
        min = min.min(stretch);
        max = max.max(stretch);
    }
    (min, max)
}

/// Assemble one monitor row from the pre-step state and the freshly
/// computed next level.
pub fn record(
    step: u64,
    t: f64,
    state: &StatePair,
    next: &FieldLevel,
    params: &RodParameters,
    grid: &Grid,
) -> DiagnosticsRecord {
    let (px, py) = linear_momentum(state, params, grid);
    let (c1_max, c2_max) = constraint_residuals(state, next, params, grid);
    let (stretch_min, stretch_max) = stretch_extrema(&state.curr, grid);
    DiagnosticsRecord {
        step,
        t,
        energy: total_energy(state, params, grid),
        px,
        py,
        ptheta: torsional_momentum(state, params, grid),
        jz: angular_momentum(state, params, grid),
        c1_max,
        c2_max,
        stretch_min,
        stretch_max,
    }
}

/// Analytic derivatives of a smooth candidate solution, for residual
/// checks of the continuum equations.
pub trait ManufacturedSolution {
    fn x_t(&self, t: f64, s: f64) -> f64;
    fn x_tt(&self, t: f64, s: f64) -> f64;
    fn x_s(&self, t: f64, s: f64) -> f64;
    fn x_ssss(&self, t: f64, s: f64) -> f64;
    fn y_t(&self, t: f64, s: f64) -> f64;
    fn y_tt(&self, t: f64, s: f64) -> f64;
    fn y_s(&self, t: f64, s: f64) -> f64;
    fn y_ssss(&self, t: f64, s: f64) -> f64;
    fn theta_t(&self, t: f64, s: f64) -> f64;
    fn theta_tt(&self, t: f64, s: f64) -> f64;
    fn theta_ss(&self, t: f64, s: f64) -> f64;
    fn lambda(&self, t: f64, s: f64) -> f64;
    fn mu(&self, t: f64, s: f64) -> f64;
}

/// Pointwise residuals of the continuum nonholonomic field equations
/// and the two rolling-constraint values for a manufactured solution
/// with prescribed multipliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumResidual {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub c1: f64,
    pub c2: f64,
}

pub fn continuum_nh_residual<M: ManufacturedSolution>(
    solution: &M,
    params: &RodParameters,
    t: f64,
    s: f64,
) -> ContinuumResidual {
    let l = solution.lambda(t, s);
    let m = solution.mu(t, s);
    let xs = solution.x_s(t, s);
    let ys = solution.y_s(t, s);
    ContinuumResidual {
        x: params.rho * solution.x_tt(t, s) + params.bend_k * solution.x_ssss(t, s) - l,
        y: params.rho * solution.y_tt(t, s) + params.bend_k * solution.y_ssss(t, s) - m,
        theta: params.alpha * solution.theta_tt(t, s)
            - params.beta * solution.theta_ss(t, s)
            - params.radius * (l * ys - m * xs),
        c1: solution.x_t(t, s) + params.radius * solution.theta_t(t, s) * ys,
        c2: solution.y_t(t, s) - params.radius * solution.theta_t(t, s) * xs,
    }
}
