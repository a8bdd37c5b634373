//! Structure-preserving simulator for the nonholonomic planar Cosserat
//! rod: an explicit second-order discrete field integrator that enforces
//! the rolling constraints exactly at every node and step, together with
//! a generic discrete-variational oracle and conservation-law
//! diagnostics.

pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod integrator;
pub mod oracle;
pub mod params;
pub mod presets;
pub mod stencil;

pub use error::Error;
pub use field::{FieldLevel, InitialData, StatePair};
pub use grid::{BoundaryCondition, GhostKind, Grid};
pub use integrator::{
    build_initial_pair, constrained_step, constraint_coefficients, free_predictor, free_step,
    solve_multipliers, stability_limit, ConstraintCoefficients, Multipliers, StepResult,
};
pub use params::RodParameters;
