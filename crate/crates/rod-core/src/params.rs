//! Physical constants of the rod model.

use crate::error::Error;

/// Physical parameters of the planar Cosserat rod.
///
/// `rho` is the mass density per unit length, `alpha` the torsional
/// inertia coefficient, `beta` the torsional stiffness, `bend_k` the
/// bending stiffness, `radius` the lamina radius, and `length` the
/// reference length of the rod.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RodParameters {
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
    pub bend_k: f64,
    pub radius: f64,
    pub length: f64,
}

impl RodParameters {
    pub fn new(
        rho: f64,
        alpha: f64,
        beta: f64,
        bend_k: f64,
        radius: f64,
        length: f64,
    ) -> Result<Self, Error> {
        let p = Self {
            rho,
            alpha,
            beta,
            bend_k,
            radius,
            length,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), Error> {
        let strictly_positive = [
            ("rho", self.rho),
            ("alpha", self.alpha),
            ("length", self.length),
        ];
        for (name, v) in strictly_positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    requirement: "must be finite and > 0",
                });
            }
        }
        let nonnegative = [
            ("beta", self.beta),
            ("bend_k", self.bend_k),
            ("radius", self.radius),
        ];
        for (name, v) in nonnegative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    requirement: "must be finite and >= 0",
                });
            }
        }
        Ok(())
    }

    /// The parameter set used for the reference simulation:
    /// alpha = 1, beta = 0.8, rho = 1, K = 0.7, R = 1, length = 4.
    pub fn reference() -> Self {
        Self {
            rho: 1.0,
            alpha: 1.0,
            beta: 0.8,
            bend_k: 0.7,
            radius: 1.0,
            length: 4.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let p = RodParameters::reference();
        assert_eq!(p.alpha, 1.0);
        assert_eq!(p.beta, 0.8);
        assert_eq!(p.rho, 1.0);
        assert_eq!(p.bend_k, 0.7);
        assert_eq!(p.radius, 1.0);
        assert_eq!(p.length, 4.0);
    }

    #[test]
    fn rejects_nonpositive_density() {
        assert!(RodParameters::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(RodParameters::new(-1.0, 1.0, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(RodParameters::new(f64::NAN, 1.0, 0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn accepts_zero_stiffness() {
        assert!(RodParameters::new(1.0, 1.0, 0.0, 0.0, 0.0, 1.0).is_ok());
    }
}
