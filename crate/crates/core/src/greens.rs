//! Closed-form planar fundamental solution and the Green's function of the
//! sharp two-phase operator.
//!
//! With the pole on one side of the interface, the Green's function is the
//! usual image construction: on the pole's side it is `Gamma / a_pole` plus a
//! reflected correction whose singularity lies at the mirror image of the
//! pole (outside that side), and on the far side it is a transmitted multiple
//! of `Gamma`. Both branches agree on the interface, and the one-sided normal
//! fluxes match there.

use thiserror::Error;

use crate::coeff::Medium;
use crate::Point;

#[derive(Debug, Error, PartialEq)]
pub enum GreensError {
    #[error("evaluation point coincides with the singularity")]
    Singularity,
    #[error("closed-form Green's function requires a sharp medium")]
    MollifiedUnsupported,
    #[error("closed-form Green's function requires the pole off the interface")]
    PoleOnInterface,
}

/// Planar fundamental solution of the Laplacian, `-(1/2pi) ln |x - y|`.
pub fn fundamental(x: Point, y: Point) -> Result<f64, GreensError> {
    let d = x.dist(y);
    if d == 0.0 {
        return Err(GreensError::Singularity);
    }
    Ok(-d.ln() / (2.0 * std::f64::consts::PI))
}

/// The fundamental solution evaluated at the mirror image of `x` across the
/// interface: `fundamental((x.x, -x.y), y)`.
pub fn reflected(x: Point, y: Point) -> Result<f64, GreensError> {
    fundamental(x.reflect(), y)
}

/// Evaluator for the two-phase Green's function with a fixed pole.
#[derive(Debug, Clone, Copy)]
pub struct GreensEval {
    medium: Medium,
    pole: Point,
}

impl GreensEval {
    pub fn new(medium: Medium, pole: Point) -> Result<Self, GreensError> {
        if !medium.is_sharp() {
            return Err(GreensError::MollifiedUnsupported);
        }
        if pole.y == 0.0 {
            return Err(GreensError::PoleOnInterface);
        }
        Ok(GreensEval { medium, pole })
    }

    pub fn pole(&self) -> Point {
        self.pole
    }

    pub fn medium(&self) -> Medium {
        self.medium
    }

    /// Evaluate `G(x, pole)`.
    ///
    /// The same-side branch carries the image correction (its singularity
    /// sits at the mirror image of the pole, on the other side); the far-side
    /// branch is a transmitted multiple of the fundamental solution. At
    /// `x.y = 0` the two branches agree.
    pub fn eval(&self, x: Point) -> Result<f64, GreensError> {
        let (a, b) = (self.medium.alpha, self.medium.beta);
        // Coefficients seen from the pole's side: `near` is the coefficient on
        // the pole's side of the interface.
        let (near, far, same_side) = if self.pole.y > 0.0 {
            (a, b, x.y >= 0.0)
        } else {
            (b, a, x.y <= 0.0)
        };
        let gamma = fundamental(x, self.pole)?;
        if same_side {
            let image = reflected(x, self.pole)?;
            Ok(gamma / near + (near - far) / (near * (near + far)) * image)
        } else {
            Ok(2.0 / (near + far) * gamma)
        }
    }
}
