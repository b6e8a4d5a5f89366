//! Two-phase scalar coefficient field.
//!
//! The field takes the value `alpha` above the interface `{y = 0}` and
//! `beta` below it. With a positive mollification radius `s` the jump is
//! replaced by a `C^2` polynomial transition supported on `|y| <= s`,
//! obtained by convolving the step with the bump `rho(t) = (15/16)(1-t^2)^2`
//! on `[-1, 1]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Point;

#[derive(Debug, Error, PartialEq)]
pub enum CoeffError {
    #[error("coefficient field parameters must satisfy alpha > 0, beta > 0, moll_radius >= 0 (got alpha={alpha}, beta={beta}, moll_radius={moll_radius})")]
    InvalidParameters {
        alpha: f64,
        beta: f64,
        moll_radius: f64,
    },
    #[error("sharp coefficient field has no value on the interface y = 0")]
    InterfaceValueUndefined,
}

/// The piecewise-constant two-phase medium, or its mollified version when
/// `moll_radius > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    pub alpha: f64,
    pub beta: f64,
    pub moll_radius: f64,
}

impl Medium {
    pub fn new(alpha: f64, beta: f64, moll_radius: f64) -> Result<Self, CoeffError> {
        let ok = alpha > 0.0
            && beta > 0.0
            && moll_radius >= 0.0
            && alpha.is_finite()
            && beta.is_finite()
            && moll_radius.is_finite();
        if !ok {
            return Err(CoeffError::InvalidParameters {
                alpha,
                beta,
                moll_radius,
            });
        }
        Ok(Medium {
            alpha,
            beta,
            moll_radius,
        })
    }

    /// Sharp jump, no mollification.
    pub fn sharp(alpha: f64, beta: f64) -> Result<Self, CoeffError> {
        Medium::new(alpha, beta, 0.0)
    }

    pub fn is_sharp(&self) -> bool {
        self.moll_radius == 0.0
    }

    /// `(lambda, Lambda) = (min(alpha, beta), max(alpha, beta))`. Every value
    /// the field takes, mollified or not, lies in this interval.
    pub fn ellipticity_bounds(&self) -> (f64, f64) {
        (self.alpha.min(self.beta), self.alpha.max(self.beta))
    }

    /// Evaluate the scalar coefficient at a point. Only the `y` coordinate
    /// matters. A sharp medium has no value exactly on the interface.
    pub fn eval_f(&self, point: Point) -> Result<f64, CoeffError> {
        let y = point.y;
        if self.is_sharp() {
            if y > 0.0 {
                Ok(self.alpha)
            } else if y < 0.0 {
                Ok(self.beta)
            } else {
                Err(CoeffError::InterfaceValueUndefined)
            }
        } else {
            Ok(self.beta + (self.alpha - self.beta) * smoothed_step(y / self.moll_radius))
        }
    }
}

/// Integral of the normalized bump `rho(t) = (15/16)(1-t^2)^2` from `-1` to
/// `t`: zero below `-1`, one above `1`, and an odd-symmetric quintic in
/// between (so `smoothed_step(0) = 1/2`).
fn smoothed_step(t: f64) -> f64 {
    if t <= -1.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        0.5 + (15.0 / 16.0) * (t - 2.0 * t.powi(3) / 3.0 + t.powi(5) / 5.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bump(t: f64) -> f64 {
        (15.0 / 16.0) * (1.0 - t * t) * (1.0 - t * t)
    }

    /// Simpson quadrature of the bump, the reference for `smoothed_step`.
    fn bump_integral(upper: f64) -> f64 {
        let n = 20_000;
        let a = -1.0;
        let h = (upper - a) / n as f64;
        let mut sum = bump(a) + bump(upper);
        for k in 1..n {
            let t = a + k as f64 * h;
            sum += if k % 2 == 1 { 4.0 } else { 2.0 } * bump(t);
        }
        sum * h / 3.0
    }

    #[test]
    fn sharp_field_values() {
        let m = Medium::sharp(2.0, 1.0).unwrap();
        assert_eq!(m.eval_f(Point::new(0.3, 0.5)).unwrap(), 2.0);
        assert_eq!(m.eval_f(Point::new(-4.0, -0.01)).unwrap(), 1.0);
        assert_eq!(
            m.eval_f(Point::new(0.3, 0.0)),
            Err(CoeffError::InterfaceValueUndefined)
        );
    }

    #[test]
    fn mollified_field_values() {
        let m = Medium::new(2.0, 1.0, 0.1).unwrap();
        // Beyond the band the mollified field is exactly constant.
        assert_eq!(m.eval_f(Point::new(0.0, 0.2)).unwrap(), 2.0);
        assert_eq!(m.eval_f(Point::new(0.0, -0.2)).unwrap(), 1.0);
        // Midpoint of the band: the even bump integrates to 1/2.
        assert_abs_diff_eq!(m.eval_f(Point::new(0.0, 0.0)).unwrap(), 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(bump_integral(0.0), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn smoothed_step_matches_quadrature() {
        for &t in &[-0.9, -0.5, -0.1, 0.0, 0.3, 0.7, 0.99] {
            assert_abs_diff_eq!(smoothed_step(t), bump_integral(t), epsilon = 1e-10);
        }
    }

    #[test]
    fn ellipticity_bounds_cover_all_values() {
        let m = Medium::new(0.8, 1.2, 0.05).unwrap();
        let (lo, hi) = m.ellipticity_bounds();
        assert_eq!((lo, hi), (0.8, 1.2));
        for k in -100..=100 {
            let y = k as f64 * 0.001;
            let f = m.eval_f(Point::new(0.0, y)).unwrap();
            assert!(f >= lo - 1e-15 && f <= hi + 1e-15, "f({y}) = {f}");
        }
        assert_eq!(Medium::sharp(1.0, 1.0).unwrap().ellipticity_bounds(), (1.0, 1.0));
        assert_eq!(Medium::sharp(2.0, 1.0).unwrap().ellipticity_bounds(), (1.0, 2.0));
    }

    #[test]
    fn mollified_field_is_monotone_and_x_invariant() {
        let m = Medium::new(0.7, 1.9, 0.25).unwrap();
        let mut prev = m.eval_f(Point::new(0.0, -0.3)).unwrap();
        for k in -299..=300 {
            let y = k as f64 * 0.001;
            let f = m.eval_f(Point::new(0.0, y)).unwrap();
            // alpha < beta here, so the transition decreases in y.
            assert!(f <= prev + 1e-15);
            assert_eq!(f, m.eval_f(Point::new(17.3, y)).unwrap());
            prev = f;
        }
    }

    #[test]
    fn mollified_converges_to_sharp_off_interface() {
        let sharp = Medium::sharp(2.0, 0.5).unwrap();
        for &y in &[0.05, -0.05, 0.4, -1.0] {
            let p = Point::new(0.0, y);
            let want = sharp.eval_f(p).unwrap();
            let mut s = 0.5;
            let mut err_prev = f64::INFINITY;
            for _ in 0..8 {
                let m = Medium::new(2.0, 0.5, s).unwrap();
                let err = (m.eval_f(p).unwrap() - want).abs();
                assert!(err <= err_prev + 1e-15);
                err_prev = err;
                s *= 0.5;
            }
            assert_eq!(err_prev, 0.0, "converged exactly once s < |y|");
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(Medium::new(0.0, 1.0, 0.0).is_err());
        assert!(Medium::new(1.0, -2.0, 0.0).is_err());
        assert!(Medium::new(1.0, 1.0, -0.1).is_err());
        assert!(Medium::new(f64::NAN, 1.0, 0.0).is_err());
    }
}
