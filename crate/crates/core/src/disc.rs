//! Interface-aligned grid and five-point divergence-form discretization.
//!
//! The grid covers the square `[-M, M]^2` with spacing `h` where `N = M/h`
//! is an integer, so the interface `{y = 0}` passes exactly through the node
//! row `j = N`. Each grid edge carries a conductance: the coefficient field
//! at the edge midpoint, except that horizontal edges lying on the interface
//! of a sharp medium take the harmonic mean `2ab/(a+b)` of the two phases.
//! That choice puts the continuous piecewise-linear function with matched
//! one-sided fluxes in the discrete kernel, which is the property everything
//! downstream leans on.
//!
//! The operator discretizes `-div(a grad u)` with homogeneous Dirichlet
//! rows eliminated: [`DiscreteOperator::apply`] consumes a full nodal array,
//! uses boundary entries as Dirichlet neighbor data, and returns zeros on
//! boundary rows.

use thiserror::Error;

use crate::coeff::Medium;
use crate::Point;

#[derive(Debug, Error, PartialEq)]
pub enum DiscError {
    #[error("grid requires M > 0 and h > 0 (got M={m}, h={h})")]
    NonPositive { m: f64, h: f64 },
    #[error("M/h must be an integer so the interface passes through nodes (got M={m}, h={h})")]
    NonIntegralSpacing { m: f64, h: f64 },
    #[error("nodal array has length {got}, grid wants {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("source point ({x}, {y}) is outside the open domain")]
    SourceOutsideDomain { x: f64, y: f64 },
}

/// Square node-centered grid on `[-M, M]^2` with the interface on a node row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    /// `N = M/h`; the grid has `(2N+1)^2` nodes and the interface row is `j = N`.
    n: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(half_width: f64, spacing: f64) -> Result<Self, DiscError> {
        if !(half_width > 0.0) || !(spacing > 0.0) || !half_width.is_finite() || !spacing.is_finite()
        {
            return Err(DiscError::NonPositive {
                m: half_width,
                h: spacing,
            });
        }
        let ratio = half_width / spacing;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(DiscError::NonIntegralSpacing {
                m: half_width,
                h: spacing,
            });
        }
        Ok(Grid {
            n: n as usize,
            spacing,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Domain half-width `M = N h`.
    pub fn half_width(&self) -> f64 {
        self.n as f64 * self.spacing
    }

    pub fn interface_row(&self) -> usize {
        self.n
    }

    pub fn nodes_per_side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn cells_per_side(&self) -> usize {
        2 * self.n
    }

    pub fn node_count(&self) -> usize {
        self.nodes_per_side() * self.nodes_per_side()
    }

    pub fn cell_count(&self) -> usize {
        self.cells_per_side() * self.cells_per_side()
    }

    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * self.nodes_per_side() + i
    }

    /// Coordinates are centered so the interface row is exactly `y = 0`.
    pub fn node_coord(&self, i: usize, j: usize) -> Point {
        Point::new(
            (i as f64 - self.n as f64) * self.spacing,
            (j as f64 - self.n as f64) * self.spacing,
        )
    }

    pub fn cell_index(&self, i: usize, j: usize) -> usize {
        j * self.cells_per_side() + i
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        Point::new(
            (i as f64 + 0.5 - self.n as f64) * self.spacing,
            (j as f64 + 0.5 - self.n as f64) * self.spacing,
        )
    }

    /// Grid coordinates of a point: `(cell i, cell j, local tx, local ty)`,
    /// with locals in `[0, 1]`. Points on the outer boundary are clamped to
    /// the adjacent cell. Returns `None` outside the closed domain.
    pub fn locate(&self, p: Point) -> Option<(usize, usize, f64, f64)> {
        let side = self.cells_per_side();
        let m = self.half_width();
        if !(p.x.abs() <= m + 1e-12 * m) || !(p.y.abs() <= m + 1e-12 * m) {
            return None;
        }
        let gx = p.x / self.spacing + self.n as f64;
        let gy = p.y / self.spacing + self.n as f64;
        let i = (gx.floor() as isize).clamp(0, side as isize - 1) as usize;
        let j = (gy.floor() as isize).clamp(0, side as isize - 1) as usize;
        Some((i, j, gx - i as f64, gy - j as f64))
    }
}

/// Five-point stencil for `-div(a grad u)` stored as per-node neighbor
/// weights (`conductance / h^2`) plus the diagonal.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: Grid,
    pub(crate) w_east: Vec<f64>,
    pub(crate) w_west: Vec<f64>,
    pub(crate) w_north: Vec<f64>,
    pub(crate) w_south: Vec<f64>,
    pub(crate) diag: Vec<f64>,
}

impl DiscreteOperator {
    /// Assemble the stencil for a medium. Edge conductances are the field at
    /// edge midpoints; vertical edges never have midpoints on the interface,
    /// and sharp-interface horizontal edges take the harmonic mean.
    pub fn assemble(grid: Grid, medium: Medium) -> Self {
        let side = grid.nodes_per_side();
        let h = grid.spacing();
        let inv_h2 = 1.0 / (h * h);
        let nn = grid.node_count();
        let mut op = DiscreteOperator {
            grid,
            w_east: vec![0.0; nn],
            w_west: vec![0.0; nn],
            w_north: vec![0.0; nn],
            w_south: vec![0.0; nn],
            diag: vec![0.0; nn],
        };
        let field_at_y = |y: f64| -> f64 {
            medium
                .eval_f(Point::new(0.0, y))
                .expect("edge midpoint off the interface")
        };
        for j in 0..side {
            let y = grid.node_coord(0, j).y;
            let horizontal = if medium.is_sharp() && j == grid.interface_row() {
                2.0 * medium.alpha * medium.beta / (medium.alpha + medium.beta)
            } else {
                field_at_y(y)
            };
            let vertical = if j + 1 < side {
                field_at_y(y + 0.5 * h)
            } else {
                0.0
            };
            for i in 0..side {
                let idx = grid.node_index(i, j);
                if i + 1 < side {
                    op.w_east[idx] = horizontal * inv_h2;
                    op.w_west[idx + 1] = horizontal * inv_h2;
                }
                if j + 1 < side {
                    op.w_north[idx] = vertical * inv_h2;
                    op.w_south[idx + side] = vertical * inv_h2;
                }
            }
        }
        for idx in 0..nn {
            op.diag[idx] = op.w_east[idx] + op.w_west[idx] + op.w_north[idx] + op.w_south[idx];
        }
        op
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Matrix-vector product on a full nodal array. Boundary entries of the
    /// input act as Dirichlet data; boundary rows of the output are zero.
    pub fn apply(&self, field: &[f64]) -> Result<Vec<f64>, DiscError> {
        let nn = self.grid.node_count();
        if field.len() != nn {
            return Err(DiscError::DimensionMismatch {
                expected: nn,
                got: field.len(),
            });
        }
        let side = self.grid.nodes_per_side();
        let mut out = vec![0.0; nn];
        for j in 1..side - 1 {
            for i in 1..side - 1 {
                let idx = j * side + i;
                out[idx] = self.diag[idx] * field[idx]
                    - self.w_west[idx] * field[idx - 1]
                    - self.w_east[idx] * field[idx + 1]
                    - self.w_south[idx] * field[idx - side]
                    - self.w_north[idx] * field[idx + side];
            }
        }
        Ok(out)
    }

    /// True when every off-diagonal weight is nonpositive (weights are stored
    /// as positive conductances) and each interior diagonal dominates.
    pub fn is_m_matrix(&self) -> bool {
        let side = self.grid.nodes_per_side();
        for j in 1..side - 1 {
            for i in 1..side - 1 {
                let idx = j * side + i;
                let sum =
                    self.w_east[idx] + self.w_west[idx] + self.w_north[idx] + self.w_south[idx];
                if !(self.diag[idx] > 0.0) || self.diag[idx] + 1e-12 * self.diag[idx] < sum {
                    return false;
                }
                if self.w_east[idx] < 0.0
                    || self.w_west[idx] < 0.0
                    || self.w_north[idx] < 0.0
                    || self.w_south[idx] < 0.0
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Bilinear discretization of a unit point mass at `x0`: nonnegative nodal
/// values supported on the corners of the cell containing `x0`, summing to
/// `1/h^2` so the lumped total mass is one.
pub fn discrete_delta(grid: Grid, x0: Point) -> Result<Vec<f64>, DiscError> {
    let m = grid.half_width();
    if !(x0.x.abs() < m && x0.y.abs() < m) {
        return Err(DiscError::SourceOutsideDomain { x: x0.x, y: x0.y });
    }
    let (i, j, tx, ty) = grid.locate(x0).expect("checked inside");
    let side = grid.nodes_per_side();
    let inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    let mut src = vec![0.0; grid.node_count()];
    let mut add = |ii: usize, jj: usize, w: f64| {
        if w > 0.0 {
            src[jj * side + ii] += w * inv_h2;
        }
    };
    add(i, j, (1.0 - tx) * (1.0 - ty));
    add(i + 1, j, tx * (1.0 - ty));
    add(i, j + 1, (1.0 - tx) * ty);
    add(i + 1, j + 1, tx * ty);
    Ok(src)
}
