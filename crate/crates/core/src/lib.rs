//! Mean value sets of planar two-phase elliptic operators.
//!
//! The operator is `div(a grad u)` with a scalar coefficient that takes the
//! value `alpha` above the line `{y = 0}` and `beta` below it (optionally
//! smoothed over a band of half-width `s`). The mean value set of radius
//! parameter `R` around a pole `x0` is the noncontact set of an obstacle
//! problem driven by the operator's Green's function; we solve it on an
//! interface-aligned grid as a linear complementarity problem for the
//! nonnegative height between the Green's function and the solution.
//!
//! The crate provides:
//!
//! * [`coeff`] — the two-phase coefficient field and its mollified version,
//! * [`greens`] — closed-form fundamental solution and two-phase Green's
//!   function used for validation,
//! * [`disc`] — grid and five-point divergence-form discretization with
//!   harmonic averaging across the interface,
//! * [`solver`] — projected SOR for the complementarity problem, noncontact
//!   set extraction, blowup rescaling,
//! * [`geometry`] — set comparisons: symmetric difference against disks,
//!   convex hull deficiency, containment, interface crossing angles,
//! * [`freeboundary`] — the weighted Weiss energy, the nine-case catalog of
//!   degree-two blowup profiles, and the interface transmission diagnostic,
//! * [`artifact`] — JSON/CSV artifact formats,
//! * [`cli`] — the `mvset` command line front end.

pub mod artifact;
pub mod cli;
pub mod coeff;
pub mod disc;
pub mod freeboundary;
pub mod geometry;
pub mod greens;
mod point;
pub mod solver;

pub use point::Point;
