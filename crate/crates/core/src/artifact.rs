//! Machine-readable artifact formats.
//!
//! Solutions and boundaries are JSON; sweeps and catalog samples are CSV
//! (comma separated, header row, `.` decimals, LF line endings). Floats go
//! through serde_json's shortest round-trip encoding, so a written solution
//! reloads bit-exactly. Parsers validate shape and finiteness and never
//! panic on malformed input; the fuzz targets lean on that.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::Medium;
use crate::disc::Grid;
use crate::geometry::Polyline;
use crate::solver::{HeightField, LcpReport, MeanValueSet, ProblemSpec};
use crate::Point;

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid artifact: {0}")]
    Schema(String),
}

fn schema(msg: impl Into<String>) -> ArtifactError {
    ArtifactError::Schema(msg.into())
}

/// The `"spec"` object of a solution file.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SpecRecord {
    pub alpha: f64,
    pub beta: f64,
    pub moll_radius: f64,
    pub x0: [f64; 2],
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "M")]
    pub half_width: f64,
    pub h: f64,
    pub tol: f64,
    pub omega: f64,
}

/// The `"grid"` object of a solution file.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GridRecord {
    #[serde(rename = "M")]
    pub half_width: f64,
    pub h: f64,
    pub n_side: usize,
}

/// The `"residual"` object of a solution file.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ResidualRecord {
    pub projected_inf: f64,
    pub normalized: f64,
    pub complementarity: f64,
    pub iterations: usize,
}

impl From<LcpReport> for ResidualRecord {
    fn from(r: LcpReport) -> Self {
        ResidualRecord {
            projected_inf: r.projected_inf,
            normalized: r.normalized,
            complementarity: r.complementarity,
            iterations: r.iterations,
        }
    }
}

/// `<prefix>.solution.json`: problem description, grid, row-major nodal
/// height, row-major 0/1 cell indicator, convergence record.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SolutionFile {
    pub spec: SpecRecord,
    pub grid: GridRecord,
    pub height: Vec<f64>,
    pub indicator: Vec<u8>,
    pub residual: ResidualRecord,
}

impl SolutionFile {
    pub fn from_solution(
        spec: &ProblemSpec,
        field: &HeightField,
        set: &MeanValueSet,
        tol: f64,
        omega: f64,
    ) -> Self {
        let grid = spec.grid;
        let report = field.report().unwrap_or(LcpReport {
            iterations: 0,
            projected_inf: f64::NAN,
            normalized: f64::NAN,
            complementarity: f64::NAN,
        });
        SolutionFile {
            spec: SpecRecord {
                alpha: spec.medium.alpha,
                beta: spec.medium.beta,
                moll_radius: spec.medium.moll_radius,
                x0: spec.pole.into(),
                radius: spec.radius,
                half_width: grid.half_width(),
                h: grid.spacing(),
                tol,
                omega,
            },
            grid: GridRecord {
                half_width: grid.half_width(),
                h: grid.spacing(),
                n_side: grid.nodes_per_side(),
            },
            height: field.values().to_vec(),
            indicator: set.cells().iter().map(|&c| c as u8).collect(),
            residual: report.into(),
        }
    }

    /// Shape and value validation; everything the reconstruction relies on.
    pub fn validate(&self) -> Result<(), ArtifactError> {
        let grid = Grid::new(self.grid.half_width, self.grid.h)
            .map_err(|e| schema(format!("grid: {e}")))?;
        if grid.nodes_per_side() != self.grid.n_side {
            return Err(schema(format!(
                "n_side {} does not match M/h (want {})",
                self.grid.n_side,
                grid.nodes_per_side()
            )));
        }
        if self.height.len() != grid.node_count() {
            return Err(schema(format!(
                "height has {} entries, grid wants {}",
                self.height.len(),
                grid.node_count()
            )));
        }
        if self.indicator.len() != grid.cell_count() {
            return Err(schema(format!(
                "indicator has {} entries, grid wants {}",
                self.indicator.len(),
                grid.cell_count()
            )));
        }
        if !self.height.iter().all(|v| v.is_finite()) {
            return Err(schema("height contains non-finite values"));
        }
        if !self.indicator.iter().all(|&c| c <= 1) {
            return Err(schema("indicator entries must be 0 or 1"));
        }
        Medium::new(self.spec.alpha, self.spec.beta, self.spec.moll_radius)
            .map_err(|e| schema(e.to_string()))?;
        if !(self.spec.radius > 0.0 && self.spec.radius.is_finite()) {
            return Err(schema("R must be positive"));
        }
        if !self.spec.x0.iter().all(|c| c.is_finite()) {
            return Err(schema("x0 must be finite"));
        }
        Ok(())
    }

    /// Rebuild the in-memory objects. The height reloads bit-exactly; the
    /// set is reconstructed from the stored indicator.
    pub fn reconstruct(&self) -> Result<(ProblemSpec, HeightField, MeanValueSet), ArtifactError> {
        self.validate()?;
        let grid = Grid::new(self.grid.half_width, self.grid.h)
            .map_err(|e| schema(format!("grid: {e}")))?;
        let medium = Medium::new(self.spec.alpha, self.spec.beta, self.spec.moll_radius)
            .map_err(|e| schema(e.to_string()))?;
        let spec = ProblemSpec::new(medium, Point::from(self.spec.x0), self.spec.radius, grid)
            .map_err(|e| schema(e.to_string()))?;
        let field = HeightField::from_values(grid, self.height.clone())
            .map_err(|e| schema(e.to_string()))?
            .with_problem(spec);
        let set = MeanValueSet::from_cells(grid, self.indicator.iter().map(|&c| c == 1).collect())
            .map_err(|e| schema(e.to_string()))?;
        Ok((spec, field, set))
    }
}

/// `<prefix>.boundary.json`: the boundary polylines of the noncontact set.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoundaryFile {
    pub polylines: Vec<PolylineRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolylineRecord {
    pub closed: bool,
    pub vertices: Vec<[f64; 2]>,
}

impl BoundaryFile {
    pub fn from_set(set: &MeanValueSet) -> Self {
        BoundaryFile {
            polylines: set
                .boundaries
                .iter()
                .map(|p| PolylineRecord {
                    closed: p.closed,
                    vertices: p.vertices.iter().map(|&v| v.into()).collect(),
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), ArtifactError> {
        for (k, p) in self.polylines.iter().enumerate() {
            if !p.vertices.iter().flatten().all(|c| c.is_finite()) {
                return Err(schema(format!("polyline {k} has non-finite vertices")));
            }
            if p.closed && p.vertices.len() < 3 {
                return Err(schema(format!(
                    "closed polyline {k} has only {} vertices",
                    p.vertices.len()
                )));
            }
        }
        Ok(())
    }

    pub fn to_polylines(&self) -> Result<Vec<Polyline>, ArtifactError> {
        self.validate()?;
        Ok(self
            .polylines
            .iter()
            .map(|p| Polyline {
                vertices: p.vertices.iter().map(|&v| Point::from(v)).collect(),
                closed: p.closed,
            })
            .collect())
    }
}

/// A job file mirrors the command line flags one-to-one; every field is
/// optional and unknown keys are rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moll_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<[f64; 2]>,
    #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

pub fn parse_solution(bytes: &[u8]) -> Result<SolutionFile, ArtifactError> {
    let file: SolutionFile = serde_json::from_slice(bytes)?;
    file.validate()?;
    Ok(file)
}

pub fn parse_boundary(bytes: &[u8]) -> Result<BoundaryFile, ArtifactError> {
    let file: BoundaryFile = serde_json::from_slice(bytes)?;
    file.validate()?;
    Ok(file)
}

pub fn parse_job(bytes: &[u8]) -> Result<JobFile, ArtifactError> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ArtifactError> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn read_solution(path: &Path) -> Result<SolutionFile, ArtifactError> {
    let file: SolutionFile = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    file.validate()?;
    Ok(file)
}
