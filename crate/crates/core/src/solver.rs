//! Obstacle-problem solver for mean value sets.
//!
//! We solve directly for the nonnegative height `v` between the Green's
//! function with pole `x0` and the obstacle-problem solution. The height
//! satisfies the linear complementarity problem
//!
//! ```text
//! v >= 0,    A v >= b,    v' (A v - b) = 0,
//! b = discrete delta at x0  -  1/(pi R^2),
//! ```
//!
//! where `A` is the divergence-form stencil of [`crate::disc`]. The discrete
//! point mass is bounded, so no truncation around the Green's singularity is
//! needed, and the source density `1/|B_R|` makes the noncontact set of the
//! single-phase problem the Euclidean disk of radius `R`. Projected SOR
//! sweeps converge for this M-matrix for any relaxation factor in `(0, 2)`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::coeff::Medium;
use crate::disc::{discrete_delta, DiscError, DiscreteOperator, Grid};
use crate::geometry::{extract_cell_boundaries, Polyline};
use crate::Point;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Disc(#[from] DiscError),
    #[error("radius parameter must be positive and finite (got {0})")]
    InvalidRadius(f64),
    #[error("pole at ({x}, {y}) with R={r} does not fit: need |x0|_inf + 3R + 2h <= M = {m}")]
    DomainTooSmall { x: f64, y: f64, r: f64, m: f64 },
    #[error("relaxation factor must lie in (0, 2) (got {0})")]
    InvalidRelaxation(f64),
    #[error("operator is not an M-matrix")]
    NotMMatrix,
    #[error("projected SOR did not converge: residual {residual:.3e} after {iterations} sweeps")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("nodal array has length {got}, grid wants {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field contains non-finite values")]
    NonFiniteField,
    #[error("zoom window escapes the source domain")]
    ZoomEscapesDomain,
}

/// One mean value set computation: medium, pole, radius parameter, grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub medium: Medium,
    pub pole: Point,
    pub radius: f64,
    pub grid: Grid,
}

impl ProblemSpec {
    pub fn new(medium: Medium, pole: Point, radius: f64, grid: Grid) -> Result<Self, SolverError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(SolverError::InvalidRadius(radius));
        }
        let m = grid.half_width();
        if pole.norm_inf() + 3.0 * radius + 2.0 * grid.spacing() > m * (1.0 + 1e-12) {
            return Err(SolverError::DomainTooSmall {
                x: pole.x,
                y: pole.y,
                r: radius,
                m,
            });
        }
        Ok(ProblemSpec {
            medium,
            pole,
            radius,
            grid,
        })
    }

    /// Source density of the complementarity problem, `1/|B_R| = 1/(pi R^2)`.
    /// This normalization makes the single-phase noncontact set the disk of
    /// radius `R` itself.
    pub fn source_density(&self) -> f64 {
        1.0 / (PI * self.radius * self.radius)
    }

    /// Default SOR relaxation: near-optimal for the effective problem size,
    /// which is set by the noncontact region (about `3R` across) rather than
    /// the full domain, since the contact region pins nodes at zero.
    pub fn default_relaxation(&self) -> f64 {
        let arg = (PI * self.grid.spacing() / (3.0 * self.radius)).min(0.5 * PI);
        2.0 / (1.0 + arg.sin())
    }
}

/// Convergence record of a projected SOR run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcpReport {
    pub iterations: usize,
    /// `max_i |min(v_i, (Av - b)_i)|` over interior nodes.
    pub projected_inf: f64,
    /// `projected_inf / max(1, |b|_inf)`; the convergence criterion.
    pub normalized: f64,
    /// `v'(Av - b) / (|v|_2 |Av - b|_2)`.
    pub complementarity: f64,
}

/// Nodal height field, the primal unknown of the complementarity problem.
///
/// Fields produced by the solver satisfy `v >= 0` everywhere, vanish on the
/// outer boundary, and carry a convergence report. Synthetic and rescaled
/// fields carry no report.
#[derive(Debug, Clone)]
pub struct HeightField {
    grid: Grid,
    values: Vec<f64>,
    problem: Option<ProblemSpec>,
    report: Option<LcpReport>,
}

impl HeightField {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self, SolverError> {
        if values.len() != grid.node_count() {
            return Err(SolverError::DimensionMismatch {
                expected: grid.node_count(),
                got: values.len(),
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(SolverError::NonFiniteField);
        }
        Ok(HeightField {
            grid,
            values,
            problem: None,
            report: None,
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(Point) -> f64) -> Self {
        let side = grid.nodes_per_side();
        let mut values = vec![0.0; grid.node_count()];
        for j in 0..side {
            for i in 0..side {
                values[grid.node_index(i, j)] = f(grid.node_coord(i, j));
            }
        }
        HeightField {
            grid,
            values,
            problem: None,
            report: None,
        }
    }

    /// Attach the problem description (used when reloading artifacts).
    pub fn with_problem(mut self, spec: ProblemSpec) -> Self {
        self.problem = Some(spec);
        self
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn problem(&self) -> Option<&ProblemSpec> {
        self.problem.as_ref()
    }

    pub fn report(&self) -> Option<LcpReport> {
        self.report
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Scale-invariant positivity threshold used to extract the noncontact set.
    pub fn noncontact_threshold(&self) -> f64 {
        1e-12 * self.max_value()
    }

    /// Bilinear interpolation; `None` outside the closed domain.
    pub fn bilinear(&self, p: Point) -> Option<f64> {
        let (i, j, tx, ty) = self.grid.locate(p)?;
        let side = self.grid.nodes_per_side();
        let idx = j * side + i;
        let v00 = self.values[idx];
        let v10 = self.values[idx + 1];
        let v01 = self.values[idx + side];
        let v11 = self.values[idx + side + 1];
        Some(v00 * (1.0 - tx) * (1.0 - ty) + v10 * tx * (1.0 - ty) + v01 * (1.0 - tx) * ty + v11 * tx * ty)
    }

    /// Pointwise rescaling of the nodal values. The convergence report does
    /// not survive (complementarity is not scale-free against a fixed b).
    pub fn scaled(&self, factor: f64) -> HeightField {
        HeightField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
            problem: self.problem,
            report: None,
        }
    }
}

/// Cell-based indicator of the noncontact set `{v > 0}` with its boundary
/// polylines, area and component count.
#[derive(Debug, Clone)]
pub struct MeanValueSet {
    grid: Grid,
    cells: Vec<bool>,
    pub area: f64,
    pub component_count: usize,
    pub boundaries: Vec<Polyline>,
}

impl MeanValueSet {
    /// Rebuild a set from a stored cell indicator, recomputing area,
    /// components and boundary polylines.
    pub fn from_cells(grid: Grid, cells: Vec<bool>) -> Result<Self, SolverError> {
        if cells.len() != grid.cell_count() {
            return Err(SolverError::DimensionMismatch {
                expected: grid.cell_count(),
                got: cells.len(),
            });
        }
        let cps = grid.cells_per_side();
        let area = cells.iter().filter(|&&c| c).count() as f64 * grid.spacing() * grid.spacing();
        let component_count = count_components(&cells, cps);
        let boundaries = extract_cell_boundaries(&cells, cps, &grid);
        Ok(MeanValueSet {
            grid,
            cells,
            area,
            component_count,
            boundaries,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn cell(&self, i: usize, j: usize) -> bool {
        self.cells[self.grid.cell_index(i, j)]
    }

    pub fn is_empty(&self) -> bool {
        self.area == 0.0
    }

    /// Plain average of a function over the set, by cell midpoints.
    pub fn average(&self, f: impl Fn(Point) -> f64) -> Option<f64> {
        let cps = self.grid.cells_per_side();
        let mut sum = 0.0;
        let mut count = 0usize;
        for j in 0..cps {
            for i in 0..cps {
                if self.cells[self.grid.cell_index(i, j)] {
                    sum += f(self.grid.cell_center(i, j));
                    count += 1;
                }
            }
        }
        (count > 0).then(|| sum / count as f64)
    }

    /// Oscillation (max - min) of a function over the set's cell midpoints.
    pub fn oscillation(&self, f: impl Fn(Point) -> f64) -> Option<f64> {
        let cps = self.grid.cells_per_side();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..cps {
            for i in 0..cps {
                if self.cells[self.grid.cell_index(i, j)] {
                    let val = f(self.grid.cell_center(i, j));
                    lo = lo.min(val);
                    hi = hi.max(val);
                }
            }
        }
        (hi >= lo).then_some(hi - lo)
    }
}

/// Projected SOR for `v >= 0, Av >= b, v'(Av-b) = 0`.
///
/// Sweeps interior nodes in row-major order with
/// `v_i <- max(0, v_i + omega (b_i - (Av)_i) / A_ii)` until the projected
/// residual `max_i |min(v_i, (Av-b)_i)|` drops below `tol * max(1, |b|_inf)`.
pub fn solve_lcp(
    op: &DiscreteOperator,
    b: &[f64],
    omega: f64,
    tol: f64,
    max_iter: usize,
) -> Result<HeightField, SolverError> {
    let grid = op.grid();
    let nn = grid.node_count();
    if b.len() != nn {
        return Err(SolverError::DimensionMismatch {
            expected: nn,
            got: b.len(),
        });
    }
    if !(omega > 0.0 && omega < 2.0) {
        return Err(SolverError::InvalidRelaxation(omega));
    }
    if !op.is_m_matrix() {
        return Err(SolverError::NotMMatrix);
    }
    let side = grid.nodes_per_side();
    let b_inf = b.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let threshold = tol * b_inf.max(1.0);

    let mut v = vec![0.0; nn];
    let mut iterations = 0;
    let mut projected = f64::INFINITY;
    const CHECK_EVERY: usize = 8;
    while iterations < max_iter {
        for _ in 0..CHECK_EVERY.min(max_iter - iterations) {
            sor_sweep(op, side, &mut v, b, omega);
            iterations += 1;
        }
        projected = projected_residual(op, side, &v, b);
        if projected <= threshold {
            break;
        }
    }
    if projected > threshold {
        return Err(SolverError::NonConvergence {
            iterations,
            residual: projected,
        });
    }

    let av = op.apply(&v)?;
    let mut vt_res = 0.0;
    let mut v2 = 0.0;
    let mut res2 = 0.0;
    for j in 1..side - 1 {
        for i in 1..side - 1 {
            let idx = j * side + i;
            let r = av[idx] - b[idx];
            vt_res += v[idx] * r;
            v2 += v[idx] * v[idx];
            res2 += r * r;
        }
    }
    let denom = v2.sqrt() * res2.sqrt();
    let complementarity = if denom > 0.0 { vt_res.abs() / denom } else { 0.0 };
    Ok(HeightField {
        grid,
        values: v,
        problem: None,
        report: Some(LcpReport {
            iterations,
            projected_inf: projected,
            normalized: projected / b_inf.max(1.0),
            complementarity,
        }),
    })
}

fn sor_sweep(op: &DiscreteOperator, side: usize, v: &mut [f64], b: &[f64], omega: f64) {
    for j in 1..side - 1 {
        let row = j * side;
        for idx in row + 1..row + side - 1 {
            let s = op.w_west[idx] * v[idx - 1]
                + op.w_east[idx] * v[idx + 1]
                + op.w_south[idx] * v[idx - side]
                + op.w_north[idx] * v[idx + side];
            let d = op.diag[idx];
            let r = b[idx] - d * v[idx] + s;
            let cand = v[idx] + omega * r / d;
            v[idx] = if cand > 0.0 { cand } else { 0.0 };
        }
    }
}

fn projected_residual(op: &DiscreteOperator, side: usize, v: &[f64], b: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for j in 1..side - 1 {
        let row = j * side;
        for idx in row + 1..row + side - 1 {
            let av = op.diag[idx] * v[idx]
                - op.w_west[idx] * v[idx - 1]
                - op.w_east[idx] * v[idx + 1]
                - op.w_south[idx] * v[idx - side]
                - op.w_north[idx] * v[idx + side];
            let r = (av - b[idx]).min(v[idx]);
            worst = worst.max(r.abs());
        }
    }
    worst
}

/// Overridable knobs of [`solve_mvs_with`]; the defaults are the ones every
/// experiment uses.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// SOR relaxation; `None` picks [`ProblemSpec::default_relaxation`].
    pub omega: Option<f64>,
    /// Convergence tolerance; `None` means `1e-10`.
    pub tol: Option<f64>,
    /// Sweep budget; `None` means `200` per node row.
    pub max_iter: Option<usize>,
}

impl SolveOptions {
    pub fn resolve(&self, spec: &ProblemSpec) -> (f64, f64, usize) {
        (
            self.omega.unwrap_or_else(|| spec.default_relaxation()),
            self.tol.unwrap_or(1e-10),
            self.max_iter
                .unwrap_or(200 * spec.grid.nodes_per_side()),
        )
    }
}

/// Assemble and solve the mean value set problem, then extract the
/// noncontact set at the scale-invariant threshold.
pub fn solve_mvs(spec: &ProblemSpec) -> Result<(HeightField, MeanValueSet), SolverError> {
    solve_mvs_with(spec, &SolveOptions::default())
}

pub fn solve_mvs_with(
    spec: &ProblemSpec,
    options: &SolveOptions,
) -> Result<(HeightField, MeanValueSet), SolverError> {
    let op = DiscreteOperator::assemble(spec.grid, spec.medium);
    let mut b = discrete_delta(spec.grid, spec.pole)?;
    let side = spec.grid.nodes_per_side();
    let density = spec.source_density();
    for j in 1..side - 1 {
        for i in 1..side - 1 {
            b[j * side + i] -= density;
        }
    }
    let (omega, tol, max_iter) = options.resolve(spec);
    let mut field = solve_lcp(&op, &b, omega, tol, max_iter)?;
    field.problem = Some(*spec);
    let set = noncontact_set(&field, field.noncontact_threshold());
    Ok((field, set))
}

/// Extract the noncontact set `{v > threshold}`: a cell is in the set when
/// all four corner nodes exceed the threshold. Boundary polylines trace the
/// outline of the resulting cell union along grid lines, area is the cell
/// count times `h^2`, and components are counted with 4-connectivity.
pub fn noncontact_set(field: &HeightField, threshold: f64) -> MeanValueSet {
    let grid = field.grid();
    let side = grid.nodes_per_side();
    let cps = grid.cells_per_side();
    let v = field.values();
    let mut cells = vec![false; grid.cell_count()];
    for j in 0..cps {
        for i in 0..cps {
            let idx = j * side + i;
            cells[grid.cell_index(i, j)] = v[idx] > threshold
                && v[idx + 1] > threshold
                && v[idx + side] > threshold
                && v[idx + side + 1] > threshold;
        }
    }
    let area = cells.iter().filter(|&&c| c).count() as f64 * grid.spacing() * grid.spacing();
    let component_count = count_components(&cells, cps);
    let boundaries = extract_cell_boundaries(&cells, cps, &grid);
    MeanValueSet {
        grid,
        cells,
        area,
        component_count,
        boundaries,
    }
}

fn count_components(cells: &[bool], cps: usize) -> usize {
    let mut seen = vec![false; cells.len()];
    let mut stack = Vec::new();
    let mut components = 0;
    for start in 0..cells.len() {
        if !cells[start] || seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (i, j) = (idx % cps, idx / cps);
            let mut visit = |ni: usize, nj: usize| {
                let nidx = nj * cps + ni;
                if cells[nidx] && !seen[nidx] {
                    seen[nidx] = true;
                    stack.push(nidx);
                }
            };
            if i > 0 {
                visit(i - 1, j);
            }
            if i + 1 < cps {
                visit(i + 1, j);
            }
            if j > 0 {
                visit(i, j - 1);
            }
            if j + 1 < cps {
                visit(i, j + 1);
            }
        }
    }
    components
}

/// Parabolic rescaling `v_rho(x) = v(base + rho x) / rho^2`, sampled onto
/// `zoom` by bilinear interpolation.
pub fn rescale_blowup(
    field: &HeightField,
    base: Point,
    rho: f64,
    zoom: Grid,
) -> Result<HeightField, SolverError> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(SolverError::InvalidRadius(rho));
    }
    let m_src = field.grid().half_width();
    let mz = zoom.half_width();
    let reach_x = base.x.abs() + rho * mz;
    let reach_y = base.y.abs() + rho * mz;
    if reach_x > m_src * (1.0 + 1e-12) || reach_y > m_src * (1.0 + 1e-12) {
        return Err(SolverError::ZoomEscapesDomain);
    }
    let inv_rho2 = 1.0 / (rho * rho);
    let side = zoom.nodes_per_side();
    let mut values = vec![0.0; zoom.node_count()];
    for j in 0..side {
        for i in 0..side {
            let xi = zoom.node_coord(i, j);
            let p = base + xi * rho;
            values[zoom.node_index(i, j)] =
                field.bilinear(p).ok_or(SolverError::ZoomEscapesDomain)? * inv_rho2;
        }
    }
    Ok(HeightField {
        grid: zoom,
        values,
        problem: None,
        report: None,
    })
}
