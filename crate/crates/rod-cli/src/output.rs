//! CSV writers for diagnostics rows and field snapshots.

use std::io::{self, Write};

use rod_core::diagnostics::DiagnosticsRecord;
use rod_core::{FieldLevel, Grid};

/// 17 significant digits: enough to round-trip an f64 exactly.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub const DIAGNOSTICS_HEADER: &str =
    "step,t,energy,px,py,ptheta,jz,c1_max,c2_max,stretch_min,stretch_max";

pub fn write_diagnostics_header<W: Write>(w: &mut W) -> io::Result<()> {
    writeln!(w, "{DIAGNOSTICS_HEADER}")
}

pub fn write_diagnostics_row<W: Write>(w: &mut W, rec: &DiagnosticsRecord) -> io::Result<()> {
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{},{},{}",
        rec.step,
        fmt(rec.t),
        fmt(rec.energy),
        fmt(rec.px),
        fmt(rec.py),
        fmt(rec.ptheta),
        fmt(rec.jz),
        fmt(rec.c1_max),
        fmt(rec.c2_max),
        fmt(rec.stretch_min),
        fmt(rec.stretch_max),
    )
}

/// One snapshot block: a `step,t` header line, then one `i,s,x,y,theta`
/// row per node, then a blank separator line.
pub fn write_snapshot_block<W: Write>(
    w: &mut W,
    step: u64,
    t: f64,
    level: &FieldLevel,
    grid: &Grid,
) -> io::Result<()> {
    writeln!(w, "{step},{}", fmt(t))?;
    for i in 0..level.n_nodes() {
        writeln!(
            w,
            "{i},{},{},{},{}",
            fmt(grid.node_position(i)),
            fmt(level.x[i]),
            fmt(level.y[i]),
            fmt(level.theta[i]),
        )?;
    }
    writeln!(w)
}
