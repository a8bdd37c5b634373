//! Finite-difference stencils with ghost handling at the mesh boundary.

use crate::grid::{GhostKind, Grid};

/// Second-order centered first derivative, (f_{i+1} - f_{i-1}) / 2k.
pub fn diff1_central(field: &[f64], i: usize, grid: &Grid, kind: GhostKind) -> f64 {
    let i = i as isize;
    let fp = grid.sample(field, i + 1, kind);
    let fm = grid.sample(field, i - 1, kind);
    (fp - fm) / (2.0 * grid.spacing())
}

/// Centered second derivative, (f_{i+1} - 2 f_i + f_{i-1}) / k^2.
pub fn diff2(field: &[f64], i: usize, grid: &Grid, kind: GhostKind) -> f64 {
    let k = grid.spacing();
    delta2(field, i, grid, kind) / (k * k)
}

/// Centered fourth derivative, Delta^4 f / k^4 with
/// Delta^4 f_i = f_{i+2} - 4 f_{i+1} + 6 f_i - 4 f_{i-1} + f_{i-2}.
pub fn diff4(field: &[f64], i: usize, grid: &Grid, kind: GhostKind) -> f64 {
    let k2 = grid.spacing() * grid.spacing();
    delta4(field, i, grid, kind) / (k2 * k2)
}

/// First-order forward difference, (f_{i+1} - f_i) / k.
pub fn diff1_forward(field: &[f64], i: usize, grid: &Grid, kind: GhostKind) -> f64 {
    let fp = grid.sample(field, i as isize + 1, kind);
    (fp - field[i]) / grid.spacing()
}

/// Undivided second difference Delta^2 f_i.
pub fn delta2(field: &[f64], i: usize, grid: &Grid, kind: GhostKind) -> f64 {
    let i = i as isize;
    let fp = grid.sample(field, i + 1, kind);
    let fm = grid.sample(field, i - 1, kind);
    fp - 2.0 * field[i as usize] + fm
}

/// Undivided fourth difference Delta^4 f_i.
pub fn delta4(field: &[f64], i: usize, grid: &Grid, kind: GhostKind) -> f64 {
    let i = i as isize;
    let fpp = grid.sample(field, i + 2, kind);
    let fp = grid.sample(field, i + 1, kind);
    let fm = grid.sample(field, i - 1, kind);
    let fmm = grid.sample(field, i - 2, kind);
    (fpp + fmm) - 4.0 * (fp + fm) + 6.0 * field[i as usize]
}
