//! Spatial mesh and boundary ghost-value logic.
//!
//! Free ends are handled through ghost nodes constructed from the natural
//! boundary conditions of the rod: f'' = f''' = 0 for the centerline
//! fields and theta' = 0 for the torsion angle. Periodic meshes wrap.

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Free,
    Periodic,
}

/// How ghost values outside the mesh are synthesized for a given field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhostKind {
    /// Centerline field at a free end: f_{-1} = 2 f_0 - f_1 (f'' = 0) and
    /// f_{-2} = f_2 - 4 f_1 + 4 f_0 (f''' = 0), mirrored on the right.
    CenterlineFree,
    /// Torsion angle at a free end: symmetric reflection, theta_{-1} = theta_1.
    TorsionFree,
    /// Indices wrap modulo N.
    Periodic,
}

/// Uniform spatial mesh over the rod.
///
/// With free ends the N nodes include both endpoints, so the spacing is
/// length/(N-1); a periodic mesh of N nodes covers the circle with
/// spacing length/N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n_nodes: usize,
    spacing: f64,
    bc: BoundaryCondition,
}

impl Grid {
    /// Smallest mesh on which the fourth-difference stencil plus
    /// free-boundary ghosts is well defined.
    pub const MIN_NODES: usize = 5;

    pub fn new(n_nodes: usize, length: f64, bc: BoundaryCondition) -> Result<Self, Error> {
        if n_nodes < Self::MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "need at least {} nodes, got {n_nodes}",
                Self::MIN_NODES
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        let spacing = match bc {
            BoundaryCondition::Free => length / (n_nodes as f64 - 1.0),
            BoundaryCondition::Periodic => length / n_nodes as f64,
        };
        Ok(Self {
            n_nodes,
            spacing,
            bc,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Mesh spacing k.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    /// Arclength coordinate of node `i`.
    pub fn node_position(&self, i: usize) -> f64 {
        i as f64 * self.spacing
    }

    /// Ghost kind for the centerline fields x, y under this mesh's bc.
    pub fn centerline_ghost(&self) -> GhostKind {
        match self.bc {
            BoundaryCondition::Free => GhostKind::CenterlineFree,
            BoundaryCondition::Periodic => GhostKind::Periodic,
        }
    }

    /// Ghost kind for the torsion angle theta under this mesh's bc.
    pub fn torsion_ghost(&self) -> GhostKind {
        match self.bc {
            BoundaryCondition::Free => GhostKind::TorsionFree,
            BoundaryCondition::Periodic => GhostKind::Periodic,
        }
    }

    /// Value of `field` at a virtual index just outside the mesh.
    ///
    /// For the free kinds `virtual_index` must lie in {-2, -1, N, N+1};
    /// anything else is a contract violation. Periodic wraps any index.
    pub fn ghost_value(&self, field: &[f64], virtual_index: isize, kind: GhostKind) -> f64 {
        debug_assert_eq!(field.len(), self.n_nodes);
        let n = self.n_nodes as isize;
        match kind {
            GhostKind::Periodic => field[virtual_index.rem_euclid(n) as usize],
            GhostKind::CenterlineFree => match virtual_index {
                -1 => 2.0 * field[0] - field[1],
                -2 => field[2] - 4.0 * field[1] + 4.0 * field[0],
                v if v == n => 2.0 * field[self.n_nodes - 1] - field[self.n_nodes - 2],
                v if v == n + 1 => {
                    field[self.n_nodes - 3] - 4.0 * field[self.n_nodes - 2]
                        + 4.0 * field[self.n_nodes - 1]
                }
                _ => panic!("ghost_value: virtual index {virtual_index} outside {{-2,-1,N,N+1}}"),
            },
            GhostKind::TorsionFree => match virtual_index {
                -1 => field[1],
                -2 => field[2],
                v if v == n => field[self.n_nodes - 2],
                v if v == n + 1 => field[self.n_nodes - 3],
                _ => panic!("ghost_value: virtual index {virtual_index} outside {{-2,-1,N,N+1}}"),
            },
        }
    }

    /// Value of `field` at a (possibly virtual) index, using ghost logic
    /// outside [0, N).
    pub fn sample(&self, field: &[f64], index: isize, kind: GhostKind) -> f64 {
        if (0..self.n_nodes as isize).contains(&index) {
            field[index as usize]
        } else {
            self.ghost_value(field, index, kind)
        }
    }
}
