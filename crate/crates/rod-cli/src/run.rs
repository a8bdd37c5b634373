//! Simulation driver: bootstraps the two-level state, marches to t_end,
//! and streams diagnostics rows and snapshot blocks to disk.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rod_core::diagnostics::{self, DiagnosticsRecord};
use rod_core::presets::{initial_data, theta_wave_exact, Preset};
use rod_core::{
    build_initial_pair, constrained_step, free_step, stability_limit, FieldLevel, Grid,
    InitialData, RodParameters, StatePair,
};

use crate::config::{DtMode, InitialCondition, RunConfig};
use crate::output;
use crate::CliError;

pub struct RunSummary {
    pub steps: u64,
    pub dt: f64,
    pub final_record: DiagnosticsRecord,
    pub stability_warning: bool,
}

/// Loads a custom initial-condition file: a `x,y,theta,vx,vy,vtheta`
/// header followed by one row of node values per grid node.
pub fn load_initial_file(path: &Path, n_nodes: usize) -> Result<InitialData, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Usage(format!("cannot read initial file {}: {e}", path.display()))
    })?;
    let mut lines = text.lines();
    let header = lines.next().map(str::trim).unwrap_or("");
    if header != "x,y,theta,vx,vy,vtheta" {
        return Err(CliError::Usage(format!(
            "initial file: expected header `x,y,theta,vx,vy,vtheta`, got `{header}`"
        )));
    }
    let mut cols: [Vec<f64>; 6] = Default::default();
    for (lineno, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let values: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                CliError::Usage(format!("initial file line {}: bad number in `{line}`", lineno + 2))
            })?;
        if values.len() != 6 {
            return Err(CliError::Usage(format!(
                "initial file line {}: expected 6 values, got {}",
                lineno + 2,
                values.len()
            )));
        }
        for (col, &v) in cols.iter_mut().zip(&values) {
            col.push(v);
        }
    }
    if cols[0].len() != n_nodes {
        return Err(CliError::Usage(format!(
            "initial file has {} rows but n_nodes = {n_nodes}",
            cols[0].len()
        )));
    }
    let [x0, y0, theta0, vx0, vy0, vtheta0] = cols;
    Ok(InitialData {
        x0,
        y0,
        theta0,
        vx0,
        vy0,
        vtheta0,
    })
}

fn resolve_initial(config: &RunConfig, grid: &Grid) -> Result<InitialData, CliError> {
    match &config.initial {
        InitialCondition::Preset(p) => Ok(initial_data(*p, &config.params, grid)),
        InitialCondition::File(path) => load_initial_file(path, grid.n_nodes()),
    }
}

fn numerical(step: u64, err: impl std::fmt::Display) -> CliError {
    CliError::Numerical(format!("step {step}: {err}"))
}

fn advance(
    state: &StatePair,
    params: &RodParameters,
    grid: &Grid,
    constrained: bool,
    step: u64,
) -> Result<FieldLevel, CliError> {
    let next = if constrained {
        constrained_step(state, params, grid)
            .map_err(|e| numerical(step, e))?
            .next
    } else {
        free_step(state, params, grid)
    };
    next.validate().map_err(|e| numerical(step, e))?;
    Ok(next)
}

pub fn execute_run(config: &RunConfig) -> Result<RunSummary, CliError> {
    let grid = config.grid()?;
    let params = config.params;
    let dt = config.dt(&grid);
    let data = resolve_initial(config, &grid)?;

    let limit = stability_limit(&params, &grid);
    let stability_warning = dt > limit;
    if stability_warning {
        eprintln!("warning: dt = {dt:.6e} exceeds the stability limit {limit:.6e}");
    }

    let mut state =
        build_initial_pair(&data, &params, &grid, dt).map_err(|e| numerical(0, e))?;
    let steps = (config.t_end / dt).ceil() as u64;

    let open = |path: &Path| -> Result<BufWriter<File>, CliError> {
        File::create(path)
            .map(BufWriter::new)
            .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))
    };
    let io_err = |e: std::io::Error| CliError::Usage(format!("write failed: {e}"));
    let mut diag = open(&config.diag_path)?;
    let mut snap = open(&config.snap_path)?;

    output::write_diagnostics_header(&mut diag).map_err(io_err)?;
    output::write_snapshot_block(&mut snap, 0, 0.0, &state.curr, &grid).map_err(io_err)?;

    let mut last = None;
    for n in 1..=steps {
        let next = advance(&state, &params, &grid, config.constrained, n)?;
        let t = n as f64 * dt;
        let rec = diagnostics::record(n, t, &state, &next, &params, &grid);
        output::write_diagnostics_row(&mut diag, &rec).map_err(io_err)?;
        state.advance(next);
        if n % config.snap_every == 0 {
            output::write_snapshot_block(&mut snap, n, t, &state.curr, &grid).map_err(io_err)?;
        }
        last = Some(rec);
    }
    diag.flush().map_err(io_err)?;
    snap.flush().map_err(io_err)?;

    Ok(RunSummary {
        steps,
        dt,
        final_record: last.expect("t_end > 0 guarantees at least one step"),
        stability_warning,
    })
}

#[derive(Debug)]
pub struct ConvergenceRow {
    pub n_nodes: usize,
    pub h: f64,
    pub error: f64,
    /// Observed order versus the previous level; None for the first row.
    pub order: Option<f64>,
}

/// Refinement study against the analytic torsion standing wave. Only
/// meaningful for the theta_wave preset with radius = 0, where the
/// torsion equation decouples and has a closed-form solution.
pub fn execute_converge(
    config: &RunConfig,
    levels: &[usize],
) -> Result<Vec<ConvergenceRow>, CliError> {
    if config.initial != InitialCondition::Preset(Preset::ThetaWave) {
        return Err(CliError::Usage(
            "converge requires `preset = theta_wave`".into(),
        ));
    }
    if config.params.radius != 0.0 {
        return Err(CliError::Usage(
            "converge requires `radius = 0` (the analytic solution assumes no rolling coupling)"
                .into(),
        ));
    }
    let factor = match config.dt_mode {
        DtMode::FactorOfSpacingSquared(f) => f,
        DtMode::Explicit(_) => {
            return Err(CliError::Usage(
                "converge requires `dt_factor` so the time step refines with the grid".into(),
            ))
        }
    };
    if levels.is_empty() {
        return Err(CliError::Usage("converge requires at least one level".into()));
    }

    let params = config.params;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in levels {
        let grid = Grid::new(n, params.length, config.bc)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let h = factor * grid.spacing() * grid.spacing();
        let data = initial_data(Preset::ThetaWave, &params, &grid);
        let mut state = build_initial_pair(&data, &params, &grid, h).map_err(|e| numerical(0, e))?;
        let steps = (config.t_end / h).ceil() as u64;
        for step in 1..=steps {
            let next = advance(&state, &params, &grid, config.constrained, step)?;
            state.advance(next);
        }
        let t_final = steps as f64 * h;
        let error = (0..grid.n_nodes())
            .map(|i| {
                let exact = theta_wave_exact(&params, t_final, grid.node_position(i));
                (state.curr.theta[i] - exact).abs()
            })
            .fold(0.0, f64::max);
        // Order in the grid spacing k; with h = factor * k^2 the spacing
        // ratio is sqrt of the time-step ratio.
        let order = rows
            .last()
            .map(|prev: &ConvergenceRow| 2.0 * (prev.error / error).ln() / (prev.h / h).ln());
        rows.push(ConvergenceRow {
            n_nodes: n,
            h,
            error,
            order,
        });
    }
    Ok(rows)
}
