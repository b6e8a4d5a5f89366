//! Free-boundary analysis: the weighted Weiss energy and its radial profile,
//! the nine-case catalog of degree-two blowup profiles at interface
//! free-boundary points, and the discrete interface flux diagnostic.
//!
//! The Weiss energy of a height `w` around an interface point `x0` is
//!
//! ```text
//! Phi(r) = r^-4 Int_{B_r} (f |grad w|^2 + w) dx  -  2 r^-5 Int_{dB_r} f w^2 ds
//! ```
//!
//! with the phase weight `f = alpha` above the interface and `beta` below.
//! It is nondecreasing in `r` for heights that solve the obstacle problem
//! with source density one-half, and constant exactly on profiles that are
//! homogeneous of degree two. Solver heights carry source density
//! `1/(pi R^2)` instead, so they are rescaled by `pi R^2 / 2` before the
//! energy is evaluated.

use std::f64::consts::PI;

use thiserror::Error;

use crate::coeff::Medium;
use crate::geometry::circle_rect_overlap_area;
use crate::solver::{HeightField, ProblemSpec};
use crate::Point;

#[derive(Debug, Error, PartialEq)]
pub enum FreeBoundaryError {
    #[error("phase coefficients must be positive (got alpha={0}, beta={1})")]
    NonPositiveCoefficient(f64, f64),
    #[error("base point ({0}, {1}) is not on the interface")]
    BaseOffInterface(f64, f64),
    #[error("ball of radius {r} around ({x}, 0) escapes the domain")]
    DiskEscapesDomain { x: f64, r: f64 },
    #[error("radii must be strictly increasing and positive")]
    RadiiNotIncreasing,
    #[error("no interface nodes inside the noncontact set")]
    NoInterfaceNodes,
    #[error("diagnostic requires a sharp medium")]
    SharpMediumRequired,
    #[error("height field carries no problem description")]
    MissingProblem,
}

/// Wedge angles of the interface crossing condition:
/// `theta1 = arccos((beta-alpha)/(beta+alpha)) / 2` in `(0, pi/2]` and
/// `theta2 = theta1 + pi/2`. The obtuse root `pi - theta1` appears in the
/// catalog as the mirrored wedges rather than as a second branch here.
pub fn predicted_angles(alpha: f64, beta: f64) -> Result<(f64, f64), FreeBoundaryError> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(FreeBoundaryError::NonPositiveCoefficient(alpha, beta));
    }
    let theta1 = 0.5 * ((beta - alpha) / (beta + alpha)).acos();
    Ok((theta1, theta1 + 0.5 * PI))
}

/// Scaling factor that turns a solver height (source density `1/(pi R^2)`)
/// into a height with source density one-half, the normalization the Weiss
/// energy is calibrated to.
pub fn weiss_height_scaling(spec: &ProblemSpec) -> f64 {
    0.5 / spec.source_density()
}

/// Which side of the interface carries the contact set of a blowup profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactSide {
    Left,
    Right,
    None,
}

/// One angular piece of a blowup profile:
/// `g(theta) = c0 + ccos cos(2 theta) + csin sin(2 theta)` on `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TrigPiece {
    pub start: f64,
    pub end: f64,
    pub c0: f64,
    pub ccos: f64,
    pub csin: f64,
}

impl TrigPiece {
    fn eval(&self, theta: f64) -> f64 {
        self.c0 + self.ccos * (2.0 * theta).cos() + self.csin * (2.0 * theta).sin()
    }

    fn eval_prime(&self, theta: f64) -> f64 {
        -2.0 * self.ccos * (2.0 * theta).sin() + 2.0 * self.csin * (2.0 * theta).cos()
    }

    fn contains(&self, theta: f64) -> bool {
        theta >= self.start - 1e-12 && theta <= self.end + 1e-12
    }
}

/// A degree-two blowup profile `w = r^2 g(theta)` in closed form.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BlowupProfile {
    pub case_id: u8,
    pub side: ContactSide,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub pieces: Vec<TrigPiece>,
}

impl BlowupProfile {
    /// Angular factor `g(theta)`; zero outside the support arcs.
    pub fn eval_g(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(2.0 * PI);
        for piece in &self.pieces {
            if piece.contains(t) {
                return piece.eval(t);
            }
        }
        0.0
    }

    /// One-sided angular derivative `g'(theta)` taken from the piece that
    /// contains `theta` (zero in the contact arcs).
    pub fn eval_g_prime(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(2.0 * PI);
        for piece in &self.pieces {
            if piece.contains(t) {
                return piece.eval_prime(t);
            }
        }
        0.0
    }

    /// The profile itself, `r^2 g(theta)`.
    pub fn eval(&self, r: f64, theta: f64) -> f64 {
        r * r * self.eval_g(theta)
    }
}

fn acute_wedge_pieces(alpha: f64, beta: f64, right_contact: bool) -> (Vec<TrigPiece>, f64, f64) {
    let theta1 = 0.5 * ((beta - alpha) / (beta + alpha)).acos();
    let theta2 = theta1 + 0.5 * PI;
    let upper = TrigPiece {
        start: 0.0,
        end: 0.0,
        c0: 1.0 / (8.0 * alpha),
        ccos: -(2.0 * theta1).cos() / (8.0 * alpha),
        csin: (2.0 * theta1).sin() / (8.0 * alpha),
    };
    let lower = TrigPiece {
        start: 0.0,
        end: 0.0,
        c0: 1.0 / (8.0 * beta),
        ccos: -(2.0 * theta2).cos() / (8.0 * beta),
        csin: -(2.0 * theta2).sin() / (8.0 * beta),
    };
    let pieces = if right_contact {
        // Positivity wedge spans (pi - theta1, pi + theta2).
        vec![
            TrigPiece {
                start: PI - theta1,
                end: PI,
                ..upper
            },
            TrigPiece {
                start: PI,
                end: PI + theta2,
                ..lower
            },
        ]
    } else {
        // Contact on the left: positivity crosses the right interface ray.
        vec![
            TrigPiece {
                start: 0.0,
                end: PI - theta1,
                ..upper
            },
            TrigPiece {
                start: PI + theta2,
                end: 2.0 * PI,
                ..lower
            },
        ]
    };
    (pieces, theta1, theta2)
}

/// Mirror across the interface (`y -> -y`). Valid as a profile for the
/// swapped medium, so callers pair it with swapped coefficients.
fn vertical_mirror(pieces: &[TrigPiece]) -> Vec<TrigPiece> {
    pieces
        .iter()
        .map(|p| TrigPiece {
            start: 2.0 * PI - p.end,
            end: 2.0 * PI - p.start,
            c0: p.c0,
            ccos: p.ccos,
            csin: -p.csin,
        })
        .collect()
}

/// Mirror across the vertical axis (`x -> -x`); the operator is invariant,
/// so this maps profiles to profiles for the same medium.
fn horizontal_mirror(pieces: &[TrigPiece]) -> Vec<TrigPiece> {
    pieces
        .iter()
        .map(|p| {
            let (mut s, mut e) = (PI - p.end, PI - p.start);
            if e <= 1e-15 {
                s += 2.0 * PI;
                e += 2.0 * PI;
            }
            TrigPiece {
                start: s,
                end: e,
                c0: p.c0,
                ccos: p.ccos,
                csin: -p.csin,
            }
        })
        .collect()
}

fn half_plane_piece(coefficient: f64, upper: bool) -> TrigPiece {
    // r^2 (1 - cos 2 theta) / (8 a) = y^2 / (4 a) on the supported half.
    TrigPiece {
        start: if upper { 0.0 } else { PI },
        end: if upper { PI } else { 2.0 * PI },
        c0: 1.0 / (8.0 * coefficient),
        ccos: -1.0 / (8.0 * coefficient),
        csin: 0.0,
    }
}

/// The nine degree-two blowup profiles for a given pair of phases: the two
/// acute interface wedges (contact right / contact left), their mirrors
/// across the interface and across the vertical axis (the obtuse-branch
/// wedges), and the upper / lower / whole-plane parabolic profiles.
pub fn blowup_catalog(alpha: f64, beta: f64) -> Vec<BlowupProfile> {
    assert!(
        alpha > 0.0 && beta > 0.0,
        "phase coefficients must be positive"
    );
    let (right_acute, t1, t2) = acute_wedge_pieces(alpha, beta, true);
    let (left_acute, _, _) = acute_wedge_pieces(alpha, beta, false);
    // Wedges for the swapped medium, reflected back across the interface.
    let (sw_right, sw_t1, _) = acute_wedge_pieces(beta, alpha, true);
    let (sw_left, _, _) = acute_wedge_pieces(beta, alpha, false);
    let obtuse1 = PI - t1;
    let obtuse2 = 0.5 * PI - t1;
    debug_assert!((sw_t1 - (0.5 * PI - t1)).abs() < 1e-12);

    let profile = |case_id: u8, side, theta1, theta2, pieces| BlowupProfile {
        case_id,
        side,
        theta1,
        theta2,
        alpha,
        beta,
        pieces,
    };
    vec![
        profile(1, ContactSide::Right, Some(t1), Some(t2), right_acute.clone()),
        profile(2, ContactSide::Left, Some(t1), Some(t2), left_acute.clone()),
        profile(
            3,
            ContactSide::Right,
            Some(obtuse1),
            Some(obtuse2),
            vertical_mirror(&sw_right),
        ),
        profile(
            4,
            ContactSide::Left,
            Some(obtuse1),
            Some(obtuse2),
            vertical_mirror(&sw_left),
        ),
        profile(5, ContactSide::None, None, None, vec![half_plane_piece(alpha, true)]),
        profile(6, ContactSide::None, None, None, vec![half_plane_piece(beta, false)]),
        profile(
            7,
            ContactSide::None,
            None,
            None,
            vec![half_plane_piece(alpha, true), half_plane_piece(beta, false)],
        ),
        profile(
            8,
            ContactSide::Left,
            Some(obtuse1),
            Some(obtuse2),
            horizontal_mirror(&right_acute),
        ),
        profile(
            9,
            ContactSide::Right,
            Some(obtuse1),
            Some(obtuse2),
            horizontal_mirror(&left_acute),
        ),
    ]
}

/// Weiss energy `Phi(r)` of a height field around an interface base point.
///
/// The area integral uses the midpoint rule over cells clipped exactly to
/// the disk, with cell-centered difference gradients; the boundary integral
/// uses 720 polar midpoint samples of the bilinear interpolant. The field is
/// taken as-is: heights from the solver must be pre-scaled to the
/// half-density normalization (see [`weiss_height_scaling`]).
pub fn weiss_phi(
    field: &HeightField,
    medium: Medium,
    base: Point,
    r: f64,
) -> Result<f64, FreeBoundaryError> {
    if base.y.abs() > 1e-12 {
        return Err(FreeBoundaryError::BaseOffInterface(base.x, base.y));
    }
    let grid = field.grid();
    let m = grid.half_width();
    if !(r > 0.0) || base.x.abs() + r > m * (1.0 + 1e-12) {
        return Err(FreeBoundaryError::DiskEscapesDomain { x: base.x, r });
    }
    let h = grid.spacing();
    let side = grid.nodes_per_side();
    let cps = grid.cells_per_side();
    let v = field.values();
    let half_diag = h * std::f64::consts::SQRT_2 / 2.0;

    // Midpoint rule over exactly clipped cells; only the disk's bounding box
    // of cells is visited.
    let n0 = grid.interface_row() as f64;
    let cell_range = |center: f64| -> (usize, usize) {
        let lo = ((center - r) / h + n0).floor().max(0.0) as usize;
        let hi = (((center + r) / h + n0).ceil().max(0.0) as usize).min(cps);
        (lo.min(cps), hi)
    };
    let (i0, i1) = cell_range(base.x);
    let (j0, j1) = cell_range(0.0);
    let mut area_sum = 0.0;
    for j in j0..j1 {
        for i in i0..i1 {
            let c = grid.cell_center(i, j);
            let dist = c.dist(base);
            let frac = if dist + half_diag <= r {
                1.0
            } else if dist - half_diag >= r {
                continue;
            } else {
                let x0 = c.x - 0.5 * h;
                let y0 = c.y - 0.5 * h;
                circle_rect_overlap_area(base, r, x0, x0 + h, y0, y0 + h) / (h * h)
            };
            let idx = j * side + i;
            let v00 = v[idx];
            let v10 = v[idx + 1];
            let v01 = v[idx + side];
            let v11 = v[idx + side + 1];
            let gx = ((v10 + v11) - (v00 + v01)) / (2.0 * h);
            let gy = ((v01 + v11) - (v00 + v10)) / (2.0 * h);
            let w_mid = 0.25 * (v00 + v10 + v01 + v11);
            let f = medium
                .eval_f(c)
                .expect("cell centers are off the interface");
            area_sum += (f * (gx * gx + gy * gy) + w_mid) * frac * h * h;
        }
    }

    // Polar midpoint rule on the circle; the half-offset keeps samples off
    // the interface.
    const N_BOUNDARY: usize = 720;
    let dphi = 2.0 * PI / N_BOUNDARY as f64;
    let mut boundary_sum = 0.0;
    for k in 0..N_BOUNDARY {
        let phi = (k as f64 + 0.5) * dphi;
        let p = base + Point::new(r * phi.cos(), r * phi.sin());
        let w = field.bilinear(p).unwrap_or(0.0);
        let f = medium.eval_f(p).expect("polar samples are off the interface");
        boundary_sum += f * w * w * r * dphi;
    }

    Ok(area_sum / r.powi(4) - 2.0 * boundary_sum / r.powi(5))
}

/// Radial profile of the Weiss energy.
#[derive(Debug, Clone, PartialEq)]
pub struct WeissProfile {
    pub base: Point,
    /// `(r, Phi(r))` samples at strictly increasing radii.
    pub samples: Vec<(f64, f64)>,
    /// Multiplicative height scaling that was applied before evaluation.
    pub normalization: f64,
}

impl WeissProfile {
    pub fn max_abs_phi(&self) -> f64 {
        self.samples
            .iter()
            .map(|&(_, p)| p.abs())
            .fold(0.0, f64::max)
    }

    /// Number of adjacent sample pairs that decrease by more than `tol`.
    pub fn monotonicity_violations(&self, tol: f64) -> usize {
        self.samples
            .windows(2)
            .filter(|w| w[1].1 < w[0].1 - tol)
            .count()
    }
}

/// Sample the Weiss energy at a ladder of radii. The field is used as-is.
pub fn weiss_profile(
    field: &HeightField,
    medium: Medium,
    base: Point,
    radii: &[f64],
) -> Result<WeissProfile, FreeBoundaryError> {
    if radii.is_empty() || radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FreeBoundaryError::RadiiNotIncreasing);
    }
    let samples = radii
        .iter()
        .map(|&r| weiss_phi(field, medium, base, r).map(|phi| (r, phi)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeissProfile {
        base,
        samples,
        normalization: 1.0,
    })
}

/// Sample the Weiss energy of a solver height, applying the half-density
/// normalization recorded in its problem description.
pub fn weiss_profile_of_solution(
    field: &HeightField,
    base: Point,
    radii: &[f64],
) -> Result<WeissProfile, FreeBoundaryError> {
    let spec = field.problem().ok_or(FreeBoundaryError::MissingProblem)?;
    let scale = weiss_height_scaling(spec);
    let medium = spec.medium;
    let scaled = field.scaled(scale);
    let mut profile = weiss_profile(&scaled, medium, base, radii)?;
    profile.normalization = scale;
    Ok(profile)
}

/// Worst relative mismatch of the discrete interface flux condition
/// `alpha dv/dy(0+) = beta dv/dy(0-)` over interface nodes strictly inside
/// the noncontact set, using one-sided difference quotients normalized by
/// the largest one-sided slope.
pub fn transmission_residual(
    field: &HeightField,
    medium: Medium,
) -> Result<f64, FreeBoundaryError> {
    if !medium.is_sharp() {
        return Err(FreeBoundaryError::SharpMediumRequired);
    }
    let grid = field.grid();
    let side = grid.nodes_per_side();
    let h = grid.spacing();
    let jn = grid.interface_row();
    let v = field.values();
    let thr = field.noncontact_threshold();
    let mut worst_flux = 0.0f64;
    let mut worst_slope = 0.0f64;
    let mut found = false;
    for i in 1..side - 1 {
        let idx = jn * side + i;
        let (mid, up, down) = (v[idx], v[idx + side], v[idx - side]);
        if mid <= thr || up <= thr || down <= thr {
            continue;
        }
        found = true;
        let s_up = (up - mid) / h;
        let s_down = (mid - down) / h;
        worst_flux = worst_flux.max((medium.alpha * s_up - medium.beta * s_down).abs());
        worst_slope = worst_slope.max(s_up.abs()).max(s_down.abs());
    }
    if !found {
        return Err(FreeBoundaryError::NoInterfaceNodes);
    }
    if worst_slope == 0.0 {
        return Ok(0.0);
    }
    Ok(worst_flux / worst_slope)
}
