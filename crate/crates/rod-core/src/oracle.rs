//! Generic discrete field-theory machinery used as a brute-force
//! correctness oracle for the closed-form stepper.
//!
//! The discrete Lagrangian lives on 6-cells (two time rows by three
//! spatial columns); summing its cell-partials over the six cells that
//! contain a node yields the discrete Euler-Lagrange residual at that
//! node. Supplementing the residual equations with the discrete
//! constraints and the semi-discretized Chetaev one-forms gives a
//! 5-unknown per-node system that is solved here by Newton iteration,
//! independently of the stepper's closed-form reduction.

use crate::error::Error;
use crate::field::{FieldLevel, StatePair};
use crate::grid::Grid;
use crate::integrator::{constrained_step, constraint_coefficients};
use crate::params::RodParameters;

/// Values of one field on a 6-cell. Slot order:
/// 0 = (n, i-1), 1 = (n, i), 2 = (n, i+1),
/// 3 = (n+1, i-1), 4 = (n+1, i), 5 = (n+1, i+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell6 {
    pub x: [f64; 6],
    pub y: [f64; 6],
    pub theta: [f64; 6],
}

impl Cell6 {
    pub fn zero() -> Self {
        Self {
            x: [0.0; 6],
            y: [0.0; 6],
            theta: [0.0; 6],
        }
    }
}

/// Field values on a 3 (time) x 5 (space) patch centered on the node
/// where the residual is evaluated. Row 0 is time n-1, row 2 is n+1;
/// column 2 is the center node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Patch {
    pub x: [[f64; 5]; 3],
    pub y: [[f64; 5]; 3],
    pub theta: [[f64; 5]; 3],
}

impl Patch {
    pub fn zero() -> Self {
        Self {
            x: [[0.0; 5]; 3],
            y: [[0.0; 5]; 3],
            theta: [[0.0; 5]; 3],
        }
    }

    /// The 6-cell whose lower time row is `row` (0 or 1) and whose
    /// center column is `2 + offset`.
    fn cell(&self, row: usize, offset: isize) -> Cell6 {
        let c = (2 + offset) as usize;
        let mut cell = Cell6::zero();
        for (slot, (r, dc)) in [
            (0, (row, -1isize)),
            (1, (row, 0)),
            (2, (row, 1)),
            (3, (row + 1, -1)),
            (4, (row + 1, 0)),
            (5, (row + 1, 1)),
        ] {
            let col = (c as isize + dc) as usize;
            cell.x[slot] = self.x[r][col];
            cell.y[slot] = self.y[r][col];
            cell.theta[slot] = self.theta[r][col];
        }
        cell
    }
}

/// The discrete Lagrangian density on one cell:
/// kinetic terms over h^2, the torsional gradient over k^2 and the two
/// bending terms over k^4, all read from the lower time row.
pub fn discrete_lagrangian(cell: &Cell6, params: &RodParameters, h: f64, k: f64) -> f64 {
    let h2 = h * h;
    let k2 = k * k;
    let vx = cell.x[4] - cell.x[1];
    let vy = cell.y[4] - cell.y[1];
    let vth = cell.theta[4] - cell.theta[1];
    let dth = cell.theta[2] - cell.theta[1];
    let bx = cell.x[0] - 2.0 * cell.x[1] + cell.x[2];
    let by = cell.y[0] - 2.0 * cell.y[1] + cell.y[2];
    params.rho / (2.0 * h2) * (vx * vx + vy * vy) + params.alpha / (2.0 * h2) * vth * vth
        - params.beta / (2.0 * k2) * dth * dth
        - params.bend_k / (2.0 * k2 * k2) * (bx * bx + by * by)
}

/// Analytic partial derivatives of the discrete Lagrangian with respect
/// to every slot of the cell, per field.
pub fn cell_partials(cell: &Cell6, params: &RodParameters, h: f64, k: f64) -> Cell6 {
    let h2 = h * h;
    let k2 = k * k;
    let vx = cell.x[4] - cell.x[1];
    let vy = cell.y[4] - cell.y[1];
    let vth = cell.theta[4] - cell.theta[1];
    let dth = cell.theta[2] - cell.theta[1];
    let bx = cell.x[0] - 2.0 * cell.x[1] + cell.x[2];
    let by = cell.y[0] - 2.0 * cell.y[1] + cell.y[2];
    let kin = params.rho / h2;
    let kin_th = params.alpha / h2;
    let tor = params.beta / k2;
    let bend = params.bend_k / (k2 * k2);

    let mut d = Cell6::zero();
    d.x[0] = -bend * bx;
    d.x[1] = -kin * vx + 2.0 * bend * bx;
    d.x[2] = -bend * bx;
    d.x[4] = kin * vx;
    d.y[0] = -bend * by;
    d.y[1] = -kin * vy + 2.0 * bend * by;
    d.y[2] = -bend * by;
    d.y[4] = kin * vy;
    d.theta[1] = -kin_th * vth + tor * dth;
    d.theta[2] = -tor * dth;
    d.theta[4] = kin_th * vth;
    d
}

/// Same partials by central numeric differentiation of the Lagrangian,
/// with step 1e-6 * max(1, |value|).
pub fn cell_partials_numeric(cell: &Cell6, params: &RodParameters, h: f64, k: f64) -> Cell6 {
    let mut d = Cell6::zero();
    let mut probe = *cell;
    for slot in 0..6 {
        for field in 0..3 {
            let get = |c: &Cell6| match field {
                0 => c.x[slot],
                1 => c.y[slot],
                _ => c.theta[slot],
            };
            let set = |c: &mut Cell6, v: f64| match field {
                0 => c.x[slot] = v,
                1 => c.y[slot] = v,
                _ => c.theta[slot] = v,
            };
            let v0 = get(cell);
            let eps = 1e-6 * v0.abs().max(1.0);
            set(&mut probe, v0 + eps);
            let plus = discrete_lagrangian(&probe, params, h, k);
            set(&mut probe, v0 - eps);
            let minus = discrete_lagrangian(&probe, params, h, k);
            set(&mut probe, v0);
            let grad = (plus - minus) / (2.0 * eps);
            match field {
                0 => d.x[slot] = grad,
                1 => d.y[slot] = grad,
                _ => d.theta[slot] = grad,
            }
        }
    }
    d
}

fn el_residual_from<F>(patch: &Patch, params: &RodParameters, h: f64, k: f64, partials: F) -> [f64; 3]
where
    F: Fn(&Cell6) -> Cell6,
{
    // Node (n, i) sits in six cells. For the cell at (n, i + d) it occupies
    // slot 1 - d of the lower row; for the cell at (n-1, i + d) it occupies
    // slot 4 - d of the upper row.
    let _ = (params, h, k);
    let mut sum = [0.0f64; 3];
    for d in -1isize..=1 {
        let upper = partials(&patch.cell(1, d));
        let slot = (1 - d) as usize;
        sum[0] += upper.x[slot];
        sum[1] += upper.y[slot];
        sum[2] += upper.theta[slot];
        let lower = partials(&patch.cell(0, d));
        let slot = (4 - d) as usize;
        sum[0] += lower.x[slot];
        sum[1] += lower.y[slot];
        sum[2] += lower.theta[slot];
    }
    // Calibrated so the residual equals the defect of the update equations
    // in their displayed form, e.g. rho (x_{n+1} - 2 x_n + x_{n-1})
    // + (h^2 K / k^4) Delta^4 x for the x field.
    let scale = -h * h;
    [scale * sum[0], scale * sum[1], scale * sum[2]]
}

/// Discrete Euler-Lagrange residual at the patch center, from the
/// analytic cell-partials.
pub fn discrete_el_residual(patch: &Patch, params: &RodParameters, h: f64, k: f64) -> [f64; 3] {
    el_residual_from(patch, params, h, k, |c| cell_partials(c, params, h, k))
}

/// Discrete Euler-Lagrange residual at the patch center, from numeric
/// differentiation of the Lagrangian only.
pub fn discrete_el_residual_numeric(
    patch: &Patch,
    params: &RodParameters,
    h: f64,
    k: f64,
) -> [f64; 3] {
    el_residual_from(patch, params, h, k, |c| {
        cell_partials_numeric(c, params, h, k)
    })
}

/// Evaluation of the two semi-discretized constraints on a velocity:
/// phi^1 = v_x + a_i v_theta and phi^2 = v_y - b_i v_theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiDiscreteConstraint {
    pub phi1: f64,
    pub phi2: f64,
}

pub fn semi_discrete_constraints(
    level: &FieldLevel,
    i: usize,
    velocity: [f64; 3],
    params: &RodParameters,
    grid: &Grid,
) -> SemiDiscreteConstraint {
    let coeffs = constraint_coefficients(level, params, grid);
    let [vx, vy, vth] = velocity;
    SemiDiscreteConstraint {
        phi1: vx + coeffs.a[i] * vth,
        phi2: vy - coeffs.b[i] * vth,
    }
}

/// The two Chetaev one-forms at node `i` in the (dx, dy, dtheta) basis:
/// Phi^1 = (1, 0, a_i) and Phi^2 = (0, 1, -b_i).
pub fn chetaev_oneform(
    level: &FieldLevel,
    i: usize,
    params: &RodParameters,
    grid: &Grid,
) -> ([f64; 3], [f64; 3]) {
    let coeffs = constraint_coefficients(level, params, grid);
    ([1.0, 0.0, coeffs.a[i]], [0.0, 1.0, -coeffs.b[i]])
}

/// Gradient of a semi-discretized constraint with respect to the
/// velocity slots: the coordinate form of applying the vertical
/// endomorphism to its differential.
pub fn chetaev_from_velocity_gradient<F>(phi: F, velocity: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut grad = vec![0.0; velocity.len()];
    let mut probe = velocity.to_vec();
    for (slot, g) in grad.iter_mut().enumerate() {
        let v0 = velocity[slot];
        let eps = 1e-6 * v0.abs().max(1.0);
        probe[slot] = v0 + eps;
        let plus = phi(&probe);
        probe[slot] = v0 - eps;
        let minus = phi(&probe);
        probe[slot] = v0;
        *g = (plus - minus) / (2.0 * eps);
    }
    grad
}

const ORACLE_TOL: f64 = 1e-12;
const ORACLE_MAX_ITER: usize = 100;

/// Solve the per-node system {three discrete nonholonomic field
/// equations, two discrete constraints} for the next field values and
/// multipliers by Newton iteration, and return the max absolute
/// deviation from the closed-form constrained step at node `i`.
pub fn verify_step_equivalence(
    state: &StatePair,
    params: &RodParameters,
    grid: &Grid,
    i: usize,
) -> Result<f64, Error> {
    let n = state.n_nodes();
    assert!(
        (2..n.saturating_sub(2)).contains(&i),
        "verify_step_equivalence needs an interior node, got {i} of {n}"
    );
    let h = state.dt;
    let k = grid.spacing();
    let h2 = h * h;

    let coeffs = constraint_coefficients(&state.curr, params, grid);
    let (a, b) = (coeffs.a[i], coeffs.b[i]);

    // Fixed part of the patch: rows n-1 and n around node i. The residual
    // at (n, i) touches the upper row only through the center column.
    let mut base = Patch::zero();
    for (row, level) in [(0usize, &state.prev), (1, &state.curr)] {
        for c in 0..5 {
            let j = i + c - 2;
            base.x[row][c] = level.x[j];
            base.y[row][c] = level.y[j];
            base.theta[row][c] = level.theta[j];
        }
    }

    // Unknowns: (x+, y+, theta+, Lambda, Mu) with Lambda = h^2 lambda.
    let system = |u: &[f64; 5]| -> [f64; 5] {
        let mut patch = base;
        patch.x[2][2] = u[0];
        patch.y[2][2] = u[1];
        patch.theta[2][2] = u[2];
        // analytic cell-partials; their agreement with the numeric route
        // is asserted separately by the gradient check
        let res = discrete_el_residual(&patch, params, h, k);
        let dth = u[2] - state.prev.theta[i];
        [
            res[0] - u[3],
            res[1] - u[4],
            res[2] - (a * u[3] - b * u[4]),
            (u[0] - state.prev.x[i]) + a * dth,
            (u[1] - state.prev.y[i]) - b * dth,
        ]
    };

    let mut u = [
        state.curr.x[i],
        state.curr.y[i],
        state.curr.theta[i],
        0.0,
        0.0,
    ];
    let mut converged = false;
    let mut last_update = f64::INFINITY;
    for _ in 0..ORACLE_MAX_ITER {
        let f = system(&u);
        // finite-difference Jacobian
        let mut jac = [[0.0f64; 5]; 5];
        for col in 0..5 {
            let eps = 1e-7 * u[col].abs().max(1.0);
            let mut up = u;
            up[col] += eps;
            let fp = system(&up);
            let mut um = u;
            um[col] -= eps;
            let fm = system(&um);
            for row in 0..5 {
                jac[row][col] = (fp[row] - fm[row]) / (2.0 * eps);
            }
        }
        let delta = solve5(&mut jac, f);
        let mut max_step: f64 = 0.0;
        for c in 0..5 {
            u[c] -= delta[c];
            max_step = max_step.max(delta[c].abs());
        }
        last_update = max_step;
        if max_step < ORACLE_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::OracleDiverged {
            iterations: ORACLE_MAX_ITER,
            last_update,
        });
    }

    let closed = constrained_step(state, params, grid)?;
    let deviation = (u[0] - closed.next.x[i])
        .abs()
        .max((u[1] - closed.next.y[i]).abs())
        .max((u[2] - closed.next.theta[i]).abs())
        .max((u[3] - h2 * closed.multipliers.lambda[i]).abs())
        .max((u[4] - h2 * closed.multipliers.mu[i]).abs());
    Ok(deviation)
}

/// Gaussian elimination with partial pivoting on a 5x5 system.
fn solve5(a: &mut [[f64; 5]; 5], mut rhs: [f64; 5]) -> [f64; 5] {
    for col in 0..5 {
        let pivot = (col..5)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..5 {
            let f = a[row][col] / a[col][col];
            for c in col..5 {
                a[row][c] -= f * a[col][c];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0f64; 5];
    for row in (0..5).rev() {
        let mut acc = rhs[row];
        for c in row + 1..5 {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryCondition;
    use crate::integrator::{free_predictor, free_step};
    use crate::stencil::{delta2, delta4};
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn free_grid(n: usize, length: f64) -> Grid {
        Grid::new(n, length, BoundaryCondition::Free).unwrap()
    }

    fn random_cell(rng: &mut StdRng) -> Cell6 {
        let mut cell = Cell6::zero();
        for s in 0..6 {
            cell.x[s] = rng.gen_range(-1.0..1.0);
            cell.y[s] = rng.gen_range(-1.0..1.0);
            cell.theta[s] = rng.gen_range(-1.0..1.0);
        }
        cell
    }

    #[test]
    fn lagrangian_zero_cell() {
        let params = RodParameters::reference();
        assert_eq!(discrete_lagrangian(&Cell6::zero(), &params, 0.01, 0.1), 0.0);
    }

    #[test]
    fn lagrangian_vanishes_for_static_straight_rod() {
        let params = RodParameters::reference();
        let mut cell = Cell6::zero();
        // x linear in i, both rows identical, y = theta = 0
        for s in 0..6 {
            cell.x[s] = (s % 3) as f64 * 0.1;
        }
        assert_eq!(discrete_lagrangian(&cell, &params, 0.01, 0.1), 0.0);
    }

    #[test]
    fn lagrangian_bending_bump() {
        // x-row (0, eps, 0) in both rows, all else zero:
        // L_d = -(K / 2 k^4) (-2 eps)^2 = -2 K eps^2 / k^4
        let params = RodParameters::reference();
        let (h, k, eps) = (0.01, 0.1, 1e-2);
        let mut cell = Cell6::zero();
        cell.x[1] = eps;
        cell.x[4] = eps;
        let expected = -2.0 * params.bend_k * eps * eps / (k * k * k * k);
        assert!((discrete_lagrangian(&cell, &params, h, k) - expected).abs() < 1e-15);
    }

    #[test]
    fn analytic_and_numeric_partials_agree() {
        let params = RodParameters::reference();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let cell = random_cell(&mut rng);
            let exact = cell_partials(&cell, &params, 0.05, 0.2);
            let approx = cell_partials_numeric(&cell, &params, 0.05, 0.2);
            for s in 0..6 {
                for (e, a) in [
                    (exact.x[s], approx.x[s]),
                    (exact.y[s], approx.y[s]),
                    (exact.theta[s], approx.theta[s]),
                ] {
                    assert!(
                        (e - a).abs() <= 1e-7 * e.abs().max(1.0),
                        "slot {s}: {e} vs {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn residual_zero_on_stationary_patch() {
        let params = RodParameters::reference();
        let mut patch = Patch::zero();
        for r in 0..3 {
            for c in 0..5 {
                patch.x[r][c] = c as f64 * 0.1;
                patch.theta[r][c] = 0.3;
            }
        }
        let res = discrete_el_residual(&patch, &params, 0.01, 0.1);
        for r in res {
            assert!(r.abs() < 1e-12, "{res:?}");
        }
    }

    fn smooth_state(grid: &Grid, h: f64) -> StatePair {
        let n = grid.n_nodes();
        let mut prev = FieldLevel::zeros(0, n);
        let mut curr = FieldLevel::zeros(1, n);
        for i in 0..n {
            let s = grid.node_position(i);
            prev.x[i] = s + 0.02 * (1.1 * s).sin();
            prev.y[i] = 0.03 * (0.9 * s).cos();
            prev.theta[i] = 0.4 * (0.7 * s).sin();
            curr.x[i] = prev.x[i] + h * 0.01 * (0.5 * s).cos();
            curr.y[i] = prev.y[i] - h * 0.02 * (0.8 * s).sin();
            curr.theta[i] = prev.theta[i] + h * 0.05 * (1.3 * s).cos();
        }
        StatePair::new(prev, curr, h).unwrap()
    }

    fn patch_from_levels(prev: &FieldLevel, curr: &FieldLevel, next: &FieldLevel, i: usize) -> Patch {
        let mut patch = Patch::zero();
        for (row, level) in [(0usize, prev), (1, curr), (2, next)] {
            for c in 0..5 {
                let j = i + c - 2;
                patch.x[row][c] = level.x[j];
                patch.y[row][c] = level.y[j];
                patch.theta[row][c] = level.theta[j];
            }
        }
        patch
    }

    #[test]
    fn residual_vanishes_on_free_trajectory() {
        let params = RodParameters::reference();
        let grid = free_grid(11, 4.0);
        let h = 1e-3;
        let state = smooth_state(&grid, h);
        let next = free_step(&state, &params, &grid);
        for i in 2..9 {
            let patch = patch_from_levels(&state.prev, &state.curr, &next, i);
            let res = discrete_el_residual(&patch, &params, h, grid.spacing());
            for r in res {
                assert!(r.abs() < 1e-8, "node {i}: {res:?}");
            }
        }
    }

    #[test]
    fn numeric_residual_matches_predictor_defect() {
        // On an arbitrary patch the residual equals the defect of the
        // explicit update equations, checked against the stencil formulas.
        let params = RodParameters::reference();
        let grid = free_grid(11, 4.0);
        let (h, k) = (2e-3, grid.spacing());
        let state = smooth_state(&grid, h);
        let mut next = state.curr.clone();
        next.time_index = 2;
        for i in 0..11 {
            next.x[i] += 1e-4 * (i as f64).sin();
            next.theta[i] -= 2e-4 * (i as f64 * 0.3).cos();
        }
        let ck = grid.centerline_ghost();
        let tk = grid.torsion_ghost();
        for i in 2..9 {
            let patch = patch_from_levels(&state.prev, &state.curr, &next, i);
            let res = discrete_el_residual_numeric(&patch, &params, h, k);
            let k2 = k * k;
            let defect_x = params.rho * (next.x[i] - 2.0 * state.curr.x[i] + state.prev.x[i])
                + h * h * params.bend_k / (k2 * k2) * delta4(&state.curr.x, i, &grid, ck);
            let defect_th = params.alpha
                * (next.theta[i] - 2.0 * state.curr.theta[i] + state.prev.theta[i])
                - params.beta * h * h / k2 * delta2(&state.curr.theta, i, &grid, tk);
            assert!((res[0] - defect_x).abs() < 1e-9, "x at {i}: {} vs {defect_x}", res[0]);
            assert!((res[2] - defect_th).abs() < 1e-9, "theta at {i}");
        }
    }

    #[test]
    fn residual_translation_equivariant() {
        let params = RodParameters::reference();
        let grid = free_grid(11, 4.0);
        let h = 1e-3;
        let state = smooth_state(&grid, h);
        let next = free_predictor(&state, &params, &grid);
        let patch = patch_from_levels(&state.prev, &state.curr, &next, 4);
        let res = discrete_el_residual(&patch, &params, h, grid.spacing());
        let mut shifted = patch;
        for r in 0..3 {
            for c in 0..5 {
                shifted.x[r][c] += 17.25;
            }
        }
        let res_shifted = discrete_el_residual(&shifted, &params, h, grid.spacing());
        for (a, b) in res.iter().zip(res_shifted.iter()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn chetaev_straight_rod() {
        let params = RodParameters::reference();
        let grid = free_grid(9, 4.0);
        let n = 9;
        let x: Vec<f64> = (0..n).map(|i| grid.node_position(i)).collect();
        let level = FieldLevel::new(0, x, vec![0.0; n], vec![0.0; n]).unwrap();
        let (phi1, phi2) = chetaev_oneform(&level, 4, &params, &grid);
        assert_eq!(phi1[0], 1.0);
        assert_eq!(phi1[1], 0.0);
        assert!(phi1[2].abs() < 1e-14);
        assert_eq!(phi2[0], 0.0);
        assert_eq!(phi2[1], 1.0);
        assert!((phi2[2] + params.radius).abs() < 1e-13);
    }

    #[test]
    fn chetaev_zero_radius() {
        let mut params = RodParameters::reference();
        params.radius = 0.0;
        let grid = free_grid(9, 4.0);
        let level = FieldLevel::zeros(0, 9);
        let (phi1, phi2) = chetaev_oneform(&level, 4, &params, &grid);
        assert_eq!(phi1, [1.0, 0.0, 0.0]);
        assert_eq!(phi2, [0.0, 1.0, 0.0]);
    }

    #[test]
    fn chetaev_matches_velocity_gradient_of_rolling_constraints() {
        let params = RodParameters::reference();
        let grid = free_grid(9, 4.0);
        let state = smooth_state(&grid, 1e-3);
        let i = 4;
        let coeffs = constraint_coefficients(&state.curr, &params, &grid);
        let phi1 = |v: &[f64]| v[0] + coeffs.a[i] * v[2];
        let (form1, _) = chetaev_oneform(&state.curr, i, &params, &grid);
        let grad = chetaev_from_velocity_gradient(phi1, &[0.3, -0.1, 0.2]);
        for (g, f) in grad.iter().zip(form1.iter()) {
            assert!((g - f).abs() < 1e-9);
        }
    }

    #[test]
    fn chetaev_worked_quadratic_example() {
        // Constraint phi = A_ab v^a D y^b + B_b (D y^b)^2 with
        // D y^b = (y^b_{i+1} - y^b_{i-1}) / 2k: the generated one-form is
        // Phi^a = A_ab D y^b, independent of B.
        let a_mat = [[0.7, -0.3], [0.2, 1.1]];
        let b_vec = [0.5, -0.8];
        let dy = [0.4, -0.6]; // central differences of the two fields
        let phi = |v: &[f64]| {
            let mut val = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    val += a_mat[a][b] * v[a] * dy[b];
                }
            }
            for b in 0..2 {
                val += b_vec[b] * dy[b] * dy[b];
            }
            val
        };
        let grad = chetaev_from_velocity_gradient(phi, &[0.13, -0.27]);
        for a in 0..2 {
            let expected: f64 = (0..2).map(|b| a_mat[a][b] * dy[b]).sum();
            assert!((grad[a] - expected).abs() < 1e-9, "component {a}");
        }
    }

    #[test]
    fn oracle_stationary_deviation_zero() {
        let params = RodParameters::reference();
        let grid = free_grid(9, 4.0);
        let n = 9;
        let x: Vec<f64> = (0..n).map(|i| grid.node_position(i)).collect();
        let level0 = FieldLevel::new(0, x, vec![0.0; n], vec![0.2; n]).unwrap();
        let mut level1 = level0.clone();
        level1.time_index = 1;
        let state = StatePair::new(level0, level1, 0.01).unwrap();
        let dev = verify_step_equivalence(&state, &params, &grid, 4).unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn oracle_matches_closed_form_on_random_states() {
        let params = RodParameters::reference();
        let grid = free_grid(7, 4.0);
        let mut rng = StdRng::seed_from_u64(42);
        for trial in 0..20 {
            let state = random_state(&grid, &mut rng);
            for i in 2..5 {
                let dev = verify_step_equivalence(&state, &params, &grid, i).unwrap();
                assert!(dev <= 1e-8, "trial {trial} node {i}: deviation {dev}");
            }
        }
    }

    #[test]
    fn oracle_zero_radius_linear_system() {
        let mut params = RodParameters::reference();
        params.radius = 0.0;
        let grid = free_grid(7, 4.0);
        let mut rng = StdRng::seed_from_u64(11);
        let state = random_state(&grid, &mut rng);
        for i in 2..5 {
            let dev = verify_step_equivalence(&state, &params, &grid, i).unwrap();
            assert!(dev <= 1e-10, "node {i}: deviation {dev}");
        }
    }

    fn random_state(grid: &Grid, rng: &mut StdRng) -> StatePair {
        let n = grid.n_nodes();
        let mut prev = FieldLevel::zeros(0, n);
        let mut curr = FieldLevel::zeros(1, n);
        for i in 0..n {
            let s = grid.node_position(i);
            prev.x[i] = s + rng.gen_range(-0.05..0.05);
            prev.y[i] = rng.gen_range(-0.05..0.05);
            prev.theta[i] = rng.gen_range(-0.8..0.8);
            curr.x[i] = prev.x[i] + rng.gen_range(-0.002..0.002);
            curr.y[i] = prev.y[i] + rng.gen_range(-0.002..0.002);
            curr.theta[i] = prev.theta[i] + rng.gen_range(-0.005..0.005);
        }
        StatePair::new(prev, curr, 0.002).unwrap()
    }

    proptest! {
        #[test]
        fn admissible_velocities_annihilate_the_forms(
            vth in -2.0f64..2.0,
            shift in -0.5f64..0.5,
        ) {
            let params = RodParameters::reference();
            let grid = free_grid(9, 4.0);
            let n = 9;
            let mut level = FieldLevel::zeros(0, n);
            for i in 0..n {
                let s = grid.node_position(i);
                level.x[i] = s + 0.1 * (s + shift).sin();
                level.y[i] = 0.2 * (s - shift).cos();
            }
            let coeffs = constraint_coefficients(&level, &params, &grid);
            for i in 0..n {
                // velocity on the semi-discrete constraint manifold
                let v = [-coeffs.a[i] * vth, coeffs.b[i] * vth, vth];
                let c = semi_discrete_constraints(&level, i, v, &params, &grid);
                prop_assert!(c.phi1.abs() < 1e-12);
                prop_assert!(c.phi2.abs() < 1e-12);
                let (phi1, phi2) = chetaev_oneform(&level, i, &params, &grid);
                let p1: f64 = phi1.iter().zip(v.iter()).map(|(f, vv)| f * vv).sum();
                let p2: f64 = phi2.iter().zip(v.iter()).map(|(f, vv)| f * vv).sum();
                prop_assert!(p1.abs() < 1e-12);
                prop_assert!(p2.abs() < 1e-12);
            }
        }
    }
}
