//! Planar analysis of cell-indicator sets: boundary outlines, exact
//! circle-cell clipping, convex hulls, containment, and the angles at which
//! a set's boundary crosses the interface.

use std::collections::HashMap;

use thiserror::Error;

use crate::disc::Grid;
use crate::solver::MeanValueSet;
use crate::Point;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("set is empty")]
    EmptySet,
    #[error("set has {0} components; operation requires exactly one")]
    MultipleComponents(usize),
    #[error("sets live on different grids")]
    GridMismatch,
    #[error("angle window must be at least 10 grid spacings (got {window}, h = {h})")]
    WindowTooNarrow { window: f64, h: f64 },
    #[error("boundary does not cross the interface near x = {0}")]
    NoCrossing(f64),
    #[error("only {got} boundary vertices on the {side} side; need at least 4")]
    TooFewVertices { side: &'static str, got: usize },
}

/// An ordered chain of vertices; closed chains do not repeat the first vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub vertices: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    /// Signed shoelace area (positive for counterclockwise closed chains).
    pub fn shoelace_area(&self) -> f64 {
        if !self.closed || self.vertices.len() < 3 {
            return 0.0;
        }
        let mut twice = 0.0;
        for (k, p) in self.vertices.iter().enumerate() {
            let q = self.vertices[(k + 1) % self.vertices.len()];
            twice += p.x * q.y - q.x * p.y;
        }
        0.5 * twice
    }
}

/// Trace the outlines of a union of grid cells along grid lines.
///
/// Emits one closed polyline per boundary loop, vertices at grid nodes with
/// unit-edge resolution, oriented with the set on the left (outer loops
/// counterclockwise, holes clockwise). Where two cells meet only diagonally
/// the tighter left turn is taken, which keeps the loops consistent with
/// 4-connected components.
pub fn extract_cell_boundaries(cells: &[bool], cps: usize, grid: &Grid) -> Vec<Polyline> {
    let filled = |i: isize, j: isize| -> bool {
        i >= 0
            && j >= 0
            && (i as usize) < cps
            && (j as usize) < cps
            && cells[j as usize * cps + i as usize]
    };
    // Directed boundary edges between nodes, set interior on the left.
    let mut segments: Vec<((u32, u32), (u32, u32))> = Vec::new();
    for j in 0..cps as isize {
        for i in 0..cps as isize {
            if !filled(i, j) {
                continue;
            }
            let (iu, ju) = (i as u32, j as u32);
            if !filled(i, j - 1) {
                segments.push(((iu, ju), (iu + 1, ju)));
            }
            if !filled(i + 1, j) {
                segments.push(((iu + 1, ju), (iu + 1, ju + 1)));
            }
            if !filled(i, j + 1) {
                segments.push(((iu + 1, ju + 1), (iu, ju + 1)));
            }
            if !filled(i - 1, j) {
                segments.push(((iu, ju + 1), (iu, ju)));
            }
        }
    }
    let mut by_start: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (k, seg) in segments.iter().enumerate() {
        by_start.entry(seg.0).or_default().push(k);
    }
    let dir = |seg: &((u32, u32), (u32, u32))| -> (i32, i32) {
        (
            seg.1 .0 as i32 - seg.0 .0 as i32,
            seg.1 .1 as i32 - seg.0 .1 as i32,
        )
    };
    let mut used = vec![false; segments.len()];
    let mut loops = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        let mut node_path = Vec::new();
        let mut cur = start;
        loop {
            used[cur] = true;
            node_path.push(segments[cur].0);
            let end = segments[cur].1;
            if end == segments[start].0 {
                break;
            }
            let incoming = dir(&segments[cur]);
            let candidates = by_start.get(&end).expect("boundary loops are closed");
            // Prefer the sharpest left turn: cross > 0 beats straight beats right.
            let mut best: Option<(i32, usize)> = None;
            for &k in candidates {
                if used[k] {
                    continue;
                }
                let out = dir(&segments[k]);
                let cross = incoming.0 * out.1 - incoming.1 * out.0;
                let rank = match cross.signum() {
                    1 => 2,
                    0 => 1,
                    _ => 0,
                };
                if best.map_or(true, |(r, _)| rank > r) {
                    best = Some((rank, k));
                }
            }
            cur = best.expect("boundary loops are closed").1;
        }
        let vertices = node_path
            .into_iter()
            .map(|(i, j)| grid.node_coord(i as usize, j as usize))
            .collect();
        loops.push(Polyline {
            vertices,
            closed: true,
        });
    }
    loops
}

/// Exact area of the intersection of the disk `|p - center| <= r` with an
/// axis-aligned rectangle.
pub fn circle_rect_overlap_area(
    center: Point,
    r: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
) -> f64 {
    let corner = |x: f64, y: f64| -> f64 {
        let sx = x.signum();
        let sy = y.signum();
        sx * sy * quadrant_area(x.abs(), y.abs(), r)
    };
    let area = corner(x1 - center.x, y1 - center.y) - corner(x0 - center.x, y1 - center.y)
        - corner(x1 - center.x, y0 - center.y)
        + corner(x0 - center.x, y0 - center.y);
    area.max(0.0)
}

/// Area of `[0,a] x [0,b]` inside the origin-centered disk of radius `r`.
fn quadrant_area(a: f64, b: f64, r: f64) -> f64 {
    let a = a.min(r);
    let b = b.min(r);
    if a <= 0.0 || b <= 0.0 {
        return 0.0;
    }
    if a * a + b * b <= r * r {
        return a * b;
    }
    // Antiderivative of sqrt(r^2 - x^2).
    let f = |x: f64| 0.5 * (x * (r * r - x * x).max(0.0).sqrt() + r * r * (x / r).asin());
    let xs = (r * r - b * b).max(0.0).sqrt();
    xs * b + f(a) - f(xs)
}

/// Area of the circular segment cut from a disk of radius `r` by a chord at
/// distance `d` from the center (the smaller piece, `0 <= d <= r`).
pub fn circular_segment_area(r: f64, d: f64) -> f64 {
    assert!(r > 0.0 && (0.0..=r).contains(&d), "need 0 <= d <= r");
    r * r * (d / r).acos() - d * (r * r - d * d).sqrt()
}

/// Measure of the symmetric difference between the cell set and a disk,
/// using the exact area fraction of each cell inside the disk.
pub fn symmetric_difference_disk(set: &MeanValueSet, center: Point, radius: f64) -> f64 {
    assert!(radius > 0.0, "disk radius must be positive");
    let grid = set.grid();
    let cps = grid.cells_per_side();
    let h = grid.spacing();
    let h2 = h * h;
    let half_diag = h * std::f64::consts::SQRT_2 / 2.0;
    let mut total = 0.0;
    for j in 0..cps {
        for i in 0..cps {
            let c = grid.cell_center(i, j);
            let dist = c.dist(center);
            let inside = set.cell(i, j);
            // Cells fully inside or outside the disk need no clipping.
            let frac = if dist + half_diag <= radius {
                1.0
            } else if dist - half_diag >= radius {
                0.0
            } else {
                let x0 = c.x - 0.5 * h;
                let y0 = c.y - 0.5 * h;
                circle_rect_overlap_area(center, radius, x0, x0 + h, y0, y0 + h) / h2
            };
            total += h2 * if inside { 1.0 - frac } else { frac };
        }
    }
    total
}

/// Convex hull by monotone chain, counterclockwise without repetition.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let chain = |iter: &mut dyn Iterator<Item = Point>| -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for p in iter {
            while out.len() >= 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= 0.0 {
                out.pop();
            }
            out.push(p);
        }
        out
    };
    let mut lower = chain(&mut pts.iter().cloned());
    let mut upper = chain(&mut pts.iter().rev().cloned());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn polygon_area(points: &[Point]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for (k, p) in points.iter().enumerate() {
        let q = points[(k + 1) % points.len()];
        twice += p.x * q.y - q.x * p.y;
    }
    0.5 * twice.abs()
}

/// Relative area excess of the convex hull of the boundary vertices over the
/// set itself: zero exactly for convex cell unions, strictly positive
/// otherwise.
pub fn convexity_deficiency(set: &MeanValueSet) -> Result<f64, GeometryError> {
    if set.is_empty() {
        return Err(GeometryError::EmptySet);
    }
    if set.component_count != 1 {
        return Err(GeometryError::MultipleComponents(set.component_count));
    }
    let vertices: Vec<Point> = set
        .boundaries
        .iter()
        .flat_map(|p| p.vertices.iter().cloned())
        .collect();
    let hull = convex_hull(&vertices);
    let hull_area = polygon_area(&hull);
    Ok(((hull_area - set.area) / set.area).max(0.0))
}

/// True when every cell of `inner` lies within a `slack_cells` Chebyshev
/// dilation of `outer`. Both sets must live on the same grid.
pub fn contains(
    outer: &MeanValueSet,
    inner: &MeanValueSet,
    slack_cells: usize,
) -> Result<bool, GeometryError> {
    let g_out = outer.grid();
    let g_in = inner.grid();
    if g_out != g_in {
        return Err(GeometryError::GridMismatch);
    }
    let cps = g_out.cells_per_side();
    let s = slack_cells as isize;
    for j in 0..cps {
        for i in 0..cps {
            if !inner.cell(i, j) {
                continue;
            }
            let mut covered = false;
            'search: for dj in -s..=s {
                for di in -s..=s {
                    let ni = i as isize + di;
                    let nj = j as isize + dj;
                    if ni >= 0
                        && nj >= 0
                        && (ni as usize) < cps
                        && (nj as usize) < cps
                        && outer.cell(ni as usize, nj as usize)
                    {
                        covered = true;
                        break 'search;
                    }
                }
            }
            if !covered {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Interface-row node coverage: a node on `{y = 0}` counts as covered when
/// any of its incident cells belongs to the set.
fn interface_coverage(set: &MeanValueSet) -> Vec<bool> {
    let grid = set.grid();
    let cps = grid.cells_per_side();
    let jn = grid.interface_row();
    let cell = |i: isize, j: isize| -> bool {
        i >= 0 && j >= 0 && (i as usize) < cps && (j as usize) < cps && set.cell(i as usize, j as usize)
    };
    (0..grid.nodes_per_side())
        .map(|i| {
            let i = i as isize;
            let j = jn as isize;
            cell(i - 1, j - 1) || cell(i, j - 1) || cell(i - 1, j) || cell(i, j)
        })
        .collect()
}

/// The x-coordinates where the set's boundary meets the interface, sorted.
pub fn interface_crossings(set: &MeanValueSet) -> Vec<f64> {
    let grid = set.grid();
    let covered = interface_coverage(set);
    let mut xs = Vec::new();
    for i in 0..covered.len() - 1 {
        if covered[i] != covered[i + 1] {
            let at = if covered[i] { i } else { i + 1 };
            xs.push(grid.node_coord(at, grid.interface_row()).x);
        }
    }
    xs
}

/// Wedge half-angles of the boundary where it crosses the interface near
/// `crossing_x`.
///
/// Boundary vertices with `2h <= |y| <= window` within horizontal distance
/// `window` of the crossing are fitted with a total-least-squares line per
/// side; the returned angles are measured between each fitted ray and the
/// interface direction that points into the set.
pub fn crossing_angles(
    set: &MeanValueSet,
    crossing_x: f64,
    window: f64,
) -> Result<(f64, f64), GeometryError> {
    let grid = set.grid();
    let h = grid.spacing();
    if window < 10.0 * h * (1.0 - 1e-12) {
        return Err(GeometryError::WindowTooNarrow { window, h });
    }

    // The boundary must actually cross the interface nearby.
    let covered = interface_coverage(set);
    let jn = grid.interface_row();
    let crosses = (0..covered.len() - 1).any(|i| {
        let x = grid.node_coord(i, jn).x;
        (x - crossing_x).abs() <= window + h && covered[i] != covered[i + 1]
    });
    if !crosses {
        return Err(GeometryError::NoCrossing(crossing_x));
    }

    // Which way along the interface does the set lie?
    let cps = grid.cells_per_side();
    let mut left = 0usize;
    let mut right = 0usize;
    for j in [jn.saturating_sub(1), jn] {
        if j >= cps {
            continue;
        }
        for i in 0..cps {
            if !set.cell(i, j) {
                continue;
            }
            let x = grid.cell_center(i, j).x;
            if x < crossing_x && crossing_x - x <= window {
                left += 1;
            } else if x > crossing_x && x - crossing_x <= window {
                right += 1;
            }
        }
    }
    let into_set = if left >= right { -1.0 } else { 1.0 };

    let band = |sign: f64| -> Vec<Point> {
        set.boundaries
            .iter()
            .flat_map(|p| p.vertices.iter())
            .filter(|p| {
                let y = p.y * sign;
                (p.x - crossing_x).abs() <= window
                    && y >= 2.0 * h * (1.0 - 1e-12)
                    && y <= window * (1.0 + 1e-12)
            })
            .cloned()
            .collect()
    };
    let up = band(1.0);
    let down = band(-1.0);
    if up.len() < 4 {
        return Err(GeometryError::TooFewVertices {
            side: "upper",
            got: up.len(),
        });
    }
    if down.len() < 4 {
        return Err(GeometryError::TooFewVertices {
            side: "lower",
            got: down.len(),
        });
    }

    let angle_of = |pts: &[Point], orient_up: bool| -> f64 {
        let d = principal_direction(pts);
        let d = if (d.y > 0.0) == orient_up { d } else { d * -1.0 };
        let dot = (d.x * into_set).clamp(-1.0, 1.0);
        dot.acos()
    };
    Ok((angle_of(&up, true), angle_of(&down, false)))
}

/// Unit principal direction of a point cloud (total least squares).
fn principal_direction(pts: &[Point]) -> Point {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.x).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.y).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in pts {
        let dx = p.x - mx;
        let dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let lam = 0.5 * (sxx + syy) + (0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy).sqrt();
    let v = Point::new(sxy, lam - sxx);
    let norm = v.norm();
    if norm > 1e-30 {
        v * (1.0 / norm)
    } else if sxx >= syy {
        Point::new(1.0, 0.0)
    } else {
        Point::new(0.0, 1.0)
    }
}
