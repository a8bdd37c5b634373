//! Canonical initial conditions used by the front end and the test
//! suites.

use crate::field::InitialData;
use crate::grid::Grid;
use crate::params::RodParameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Straight rod with the twisted torsion profile of the reference
    /// experiment: x0 = s, y0 = 0, theta0 = -(pi/2) cos(pi s / l),
    /// all velocities zero.
    Paper,
    /// Straight rod at rest with no twist; an exact equilibrium.
    StraightRest,
    /// Standing torsion wave with a known analytic solution when R = 0:
    /// theta(t, s) = cos(pi s / l) cos(omega t).
    ThetaWave,
}

impl Preset {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "paper" => Some(Self::Paper),
            "straight_rest" => Some(Self::StraightRest),
            "theta_wave" => Some(Self::ThetaWave),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Paper => "paper",
            Self::StraightRest => "straight_rest",
            Self::ThetaWave => "theta_wave",
        }
    }
}

pub fn initial_data(preset: Preset, params: &RodParameters, grid: &Grid) -> InitialData {
    let n = grid.n_nodes();
    let l = params.length;
    let x: Vec<f64> = (0..n).map(|i| grid.node_position(i)).collect();
    let y = vec![0.0; n];
    let theta: Vec<f64> = match preset {
        Preset::Paper => (0..n)
            .map(|i| {
                -std::f64::consts::FRAC_PI_2
                    * (std::f64::consts::PI * grid.node_position(i) / l).cos()
            })
            .collect(),
        Preset::StraightRest => vec![0.0; n],
        Preset::ThetaWave => (0..n)
            .map(|i| (std::f64::consts::PI * grid.node_position(i) / l).cos())
            .collect(),
    };
    InitialData::at_rest(x, y, theta)
}

/// Angular frequency of the standing torsion wave,
/// omega = (pi / l) sqrt(beta / alpha).
pub fn theta_wave_omega(params: &RodParameters) -> f64 {
    std::f64::consts::PI / params.length * (params.beta / params.alpha).sqrt()
}

/// Analytic torsion angle of the standing-wave preset at (t, s),
/// valid for R = 0.
pub fn theta_wave_exact(params: &RodParameters, t: f64, s: f64) -> f64 {
    (std::f64::consts::PI * s / params.length).cos() * (theta_wave_omega(params) * t).cos()
}
