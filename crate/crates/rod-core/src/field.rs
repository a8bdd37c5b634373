//! Field storage: the three scalar fields at one time level, and the
//! two-level state carried by the explicit scheme.

use crate::error::Error;

/// The three scalar fields (x, y, theta) sampled at all nodes at one
/// time index.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldLevel {
    pub time_index: i64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub theta: Vec<f64>,
}

impl FieldLevel {
    pub fn new(time_index: i64, x: Vec<f64>, y: Vec<f64>, theta: Vec<f64>) -> Result<Self, Error> {
        let level = Self {
            time_index,
            x,
            y,
            theta,
        };
        level.validate()?;
        Ok(level)
    }

    pub fn zeros(time_index: i64, n_nodes: usize) -> Self {
        Self {
            time_index,
            x: vec![0.0; n_nodes],
            y: vec![0.0; n_nodes],
            theta: vec![0.0; n_nodes],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.x.len()
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.x.len();
        if self.y.len() != n || self.theta.len() != n {
            return Err(Error::InvalidField(format!(
                "field lengths differ: x={}, y={}, theta={}",
                n,
                self.y.len(),
                self.theta.len()
            )));
        }
        for (name, data) in [("x", &self.x), ("y", &self.y), ("theta", &self.theta)] {
            if let Some(node) = data.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { field: name, node });
            }
        }
        Ok(())
    }
}

/// Two consecutive field levels plus the time step: the full state of
/// the three-level explicit scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    pub prev: FieldLevel,
    pub curr: FieldLevel,
    pub dt: f64,
}

impl StatePair {
    pub fn new(prev: FieldLevel, curr: FieldLevel, dt: f64) -> Result<Self, Error> {
        if prev.time_index + 1 != curr.time_index {
            return Err(Error::InvalidField(format!(
                "levels are not consecutive: {} then {}",
                prev.time_index, curr.time_index
            )));
        }
        if prev.n_nodes() != curr.n_nodes() {
            return Err(Error::InvalidField(format!(
                "levels have different sizes: {} vs {}",
                prev.n_nodes(),
                curr.n_nodes()
            )));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidField(format!("dt must be positive, got {dt}")));
        }
        prev.validate()?;
        curr.validate()?;
        Ok(Self { prev, curr, dt })
    }

    pub fn n_nodes(&self) -> usize {
        self.curr.n_nodes()
    }

    /// Advance: the current level becomes the previous one.
    pub fn advance(&mut self, next: FieldLevel) {
        debug_assert_eq!(next.time_index, self.curr.time_index + 1);
        self.prev = std::mem::replace(&mut self.curr, next);
    }
}

/// Initial positions and velocities for all three fields.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    pub theta0: Vec<f64>,
    pub vx0: Vec<f64>,
    pub vy0: Vec<f64>,
    pub vtheta0: Vec<f64>,
}

impl InitialData {
    pub fn at_rest(x0: Vec<f64>, y0: Vec<f64>, theta0: Vec<f64>) -> Self {
        let n = x0.len();
        Self {
            x0,
            y0,
            theta0,
            vx0: vec![0.0; n],
            vy0: vec![0.0; n],
            vtheta0: vec![0.0; n],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.x0.len()
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.x0.len();
        let arrays: [(&'static str, &Vec<f64>); 6] = [
            ("x0", &self.x0),
            ("y0", &self.y0),
            ("theta0", &self.theta0),
            ("vx0", &self.vx0),
            ("vy0", &self.vy0),
            ("vtheta0", &self.vtheta0),
        ];
        for (name, data) in arrays {
            if data.len() != n {
                return Err(Error::InvalidField(format!(
                    "initial array {name} has length {}, expected {n}",
                    data.len()
                )));
            }
            if let Some(node) = data.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { field: name, node });
            }
        }
        Ok(())
    }
}
