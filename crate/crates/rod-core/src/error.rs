use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field data: {0}")]
    InvalidField(String),

    #[error("constrained step left a constraint residual of {residual:.3e} (tolerance {tolerance:.3e}); the multiplier solve is inconsistent")]
    ConstraintResidual { residual: f64, tolerance: f64 },

    #[error("oracle iteration failed to converge after {iterations} steps (last update {last_update:.3e})")]
    OracleDiverged { iterations: usize, last_update: f64 },

    #[error("non-finite value in field {field} at node {node}")]
    NonFinite { field: &'static str, node: usize },
}
