//! Batch front end: `solve`, `sweep`, `catalog`, `analyze`.
//!
//! All configuration is by flags; `--job <file>` loads a JSON file whose
//! keys mirror the flags one-to-one (explicit flags win). Exit codes:
//! 0 success, 2 usage or configuration error, 3 numerical failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::artifact::{self, BoundaryFile, JobFile, SolutionFile};
use crate::coeff::Medium;
use crate::disc::Grid;
use crate::freeboundary::{
    blowup_catalog, predicted_angles, weiss_profile_of_solution, BlowupProfile,
};
use crate::geometry::{
    convexity_deficiency, crossing_angles, interface_crossings, symmetric_difference_disk,
};
use crate::solver::{solve_mvs_with, HeightField, MeanValueSet, ProblemSpec, SolveOptions, SolverError};
use crate::Point;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
    fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::NonConvergence { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<artifact::ArtifactError> for CliError {
    fn from(e: artifact::ArtifactError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "mvset",
    version,
    about = "Mean value sets of planar two-phase elliptic operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem; writes <out>.solution.json and <out>.boundary.json
    Solve(SolveArgs),
    /// Solve a schedule of coefficient pairs; writes <out>.sweep.csv
    Sweep(SweepArgs),
    /// Write the nine blowup profiles; <out>.catalog.json / .catalog.csv
    Catalog(CatalogArgs),
    /// Measurements on a stored .solution.json
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug, Default)]
struct SolveArgs {
    /// JSON job file mirroring these flags
    #[arg(long)]
    job: Option<PathBuf>,
    /// Phase coefficient above the interface
    #[arg(long)]
    alpha: Option<f64>,
    /// Phase coefficient below the interface
    #[arg(long)]
    beta: Option<f64>,
    /// Mollification half-width (0 = sharp jump)
    #[arg(long)]
    moll_radius: Option<f64>,
    /// Pole, as "x,y"
    #[arg(long, value_parser = parse_point)]
    x0: Option<Point>,
    /// Radius parameter of the mean value set
    #[arg(long = "R")]
    radius: Option<f64>,
    /// Domain half-width (square domain [-M, M]^2)
    #[arg(long = "M")]
    half_width: Option<f64>,
    /// Grid spacing; M/h must be an integer
    #[arg(long = "h")]
    spacing: Option<f64>,
    /// Output path prefix
    #[arg(long)]
    out: Option<String>,
    /// Solver tolerance (default 1e-10)
    #[arg(long)]
    tol: Option<f64>,
    /// SOR relaxation factor in (0,2) (default: grid-adapted)
    #[arg(long)]
    omega: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct SweepArgs {
    /// JSON job file mirroring these flags
    #[arg(long)]
    job: Option<PathBuf>,
    /// Coefficient rule amplitude: alpha_k = 1 + a/k, beta_k = 1 - a/k
    #[arg(long)]
    rule_a: Option<f64>,
    /// First k of the rule schedule (default 2)
    #[arg(long)]
    k_min: Option<u32>,
    /// Last k of the rule schedule (default 16)
    #[arg(long)]
    k_max: Option<u32>,
    /// Explicit coefficient pairs "a1,b1;a2,b2;..." (overrides the rule)
    #[arg(long)]
    pairs: Option<String>,
    /// Mollification half-width applied to every row (0 = sharp)
    #[arg(long)]
    moll_radius: Option<f64>,
    /// Pole, as "x,y"
    #[arg(long, value_parser = parse_point)]
    x0: Option<Point>,
    #[arg(long = "R")]
    radius: Option<f64>,
    #[arg(long = "M")]
    half_width: Option<f64>,
    #[arg(long = "h")]
    spacing: Option<f64>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// Worker threads for independent rows (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long)]
    job: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Angular samples per profile in the CSV
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// A .solution.json produced by `solve`
    #[arg(long)]
    input: PathBuf,
    /// Measure interface crossing angles
    #[arg(long)]
    angles: bool,
    /// Crossing abscissa for --angles (default: rightmost crossing)
    #[arg(long)]
    crossing_x: Option<f64>,
    /// Half-width of the angle fit band (default 12h)
    #[arg(long)]
    window: Option<f64>,
    /// Sample the Weiss energy profile
    #[arg(long)]
    weiss: bool,
    /// Base point "x,y" on the interface for --weiss
    #[arg(long, value_parser = parse_point)]
    base: Option<Point>,
    /// Radii "start:end:count" for --weiss
    #[arg(long)]
    radii: Option<String>,
    /// Symmetric difference against the disk B_R(x0)
    #[arg(long)]
    symdiff: bool,
    /// Convex hull area deficiency
    #[arg(long)]
    deficiency: bool,
    /// Mean value average of a test function against its pole value
    #[arg(long)]
    mvp: bool,
    /// Test function for --mvp
    #[arg(long, value_enum)]
    test_fn: Option<TestFn>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TestFn {
    /// u = 1
    Const,
    /// u = x
    Linear,
    /// u = y/alpha above the interface, y/beta below
    Transmission,
    /// u = |x - z|^2 for a z chosen on the subharmonic side
    Quadratic,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"x,y\", got {s:?}"));
    }
    let x: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Point::new(x, y))
}

fn parse_pairs(s: &str) -> Result<Vec<(f64, f64)>, CliError> {
    s.split(';')
        .filter(|chunk| !chunk.trim().is_empty())
        .map(|chunk| {
            let p = parse_point(chunk.trim()).map_err(CliError::Config)?;
            Ok((p.x, p.y))
        })
        .collect()
}

fn parse_radii(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::config(format!(
            "radii must be start:end:count, got {s:?}"
        )));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::config(format!("radii start: {e}")))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::config(format!("radii end: {e}")))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|e| CliError::config(format!("radii count: {e}")))?;
    if n == 0 || !(a > 0.0) || b < a {
        return Err(CliError::config("radii need 0 < start <= end and count >= 1"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
        .collect())
}

fn load_job(path: &Path) -> Result<JobFile, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::config(format!("cannot read job file {}: {e}", path.display())))?;
    artifact::parse_job(&bytes)
        .map_err(|e| CliError::config(format!("job file {}: {e}", path.display())))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::config(format!("missing required value for --{flag}")))
}

fn check_job_command(job: &JobFile, expected: &str) -> Result<(), CliError> {
    if let Some(cmd) = &job.command {
        if cmd != expected {
            return Err(CliError::config(format!(
                "job file is for command {cmd:?}, invoked as {expected:?}"
            )));
        }
    }
    Ok(())
}

/// Parse the process arguments, dispatch, and map errors to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Catalog(args) => cmd_catalog(args),
        Command::Analyze(args) => cmd_analyze(args),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}

struct SolveConfig {
    spec: ProblemSpec,
    options: SolveOptions,
    out: String,
}

fn resolve_solve_config(args: SolveArgs) -> Result<SolveConfig, CliError> {
    let job = match &args.job {
        Some(path) => {
            let job = load_job(path)?;
            check_job_command(&job, "solve")?;
            job
        }
        None => JobFile::default(),
    };
    let alpha = require(args.alpha.or(job.alpha), "alpha")?;
    let beta = require(args.beta.or(job.beta), "beta")?;
    let moll = args.moll_radius.or(job.moll_radius).unwrap_or(0.0);
    let x0 = require(args.x0.or(job.x0.map(Point::from)), "x0")?;
    let radius = require(args.radius.or(job.radius), "R")?;
    let half_width = require(args.half_width.or(job.half_width), "M")?;
    let spacing = require(args.spacing.or(job.h), "h")?;
    let out = require(args.out.or(job.out), "out")?;
    let medium = Medium::new(alpha, beta, moll).map_err(|e| CliError::config(e.to_string()))?;
    let grid = Grid::new(half_width, spacing).map_err(|e| CliError::config(e.to_string()))?;
    let spec = ProblemSpec::new(medium, x0, radius, grid)?;
    let options = SolveOptions {
        omega: args.omega.or(job.omega),
        tol: args.tol.or(job.tol),
        max_iter: None,
    };
    if let Some(w) = options.omega {
        if !(w > 0.0 && w < 2.0) {
            return Err(CliError::config(format!("omega must be in (0,2), got {w}")));
        }
    }
    Ok(SolveConfig { spec, options, out })
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let cfg = resolve_solve_config(args)?;
    let (field, set) = solve_mvs_with(&cfg.spec, &cfg.options)?;
    let (omega, tol, _) = cfg.options.resolve(&cfg.spec);
    let solution = SolutionFile::from_solution(&cfg.spec, &field, &set, tol, omega);
    artifact::write_json(Path::new(&format!("{}.solution.json", cfg.out)), &solution)?;
    artifact::write_json(
        Path::new(&format!("{}.boundary.json", cfg.out)),
        &BoundaryFile::from_set(&set),
    )?;
    let deficiency = match convexity_deficiency(&set) {
        Ok(d) => format!("{d}"),
        Err(_) => "NA".to_string(),
    };
    println!(
        "area={} components={} deficiency={}",
        set.area, set.component_count, deficiency
    );
    Ok(())
}

/// One row of a sweep table.
#[derive(Debug)]
struct SweepRow {
    k: u32,
    alpha: f64,
    beta: f64,
    moll_radius: f64,
}

#[derive(Debug, Default)]
struct SweepOutcome {
    symdiff_area: Option<f64>,
    deficiency: Option<f64>,
    theta_up: Option<f64>,
    theta_down: Option<f64>,
    phi_violations: Option<usize>,
    error: Option<String>,
}

fn sweep_schedule(args: &SweepArgs, job: &JobFile) -> Result<Vec<SweepRow>, CliError> {
    let moll = args.moll_radius.or(job.moll_radius).unwrap_or(0.0);
    if let Some(pairs) = args
        .pairs
        .as_deref()
        .map(parse_pairs)
        .transpose()?
        .or_else(|| {
            job.pairs
                .as_ref()
                .map(|v| v.iter().map(|p| (p[0], p[1])).collect())
        })
    {
        if pairs.is_empty() {
            return Err(CliError::config("pair schedule is empty"));
        }
        return Ok(pairs
            .iter()
            .enumerate()
            .map(|(i, &(alpha, beta))| SweepRow {
                k: i as u32 + 1,
                alpha,
                beta,
                moll_radius: moll,
            })
            .collect());
    }
    let a = args.rule_a.or(job.rule_a).unwrap_or(0.5);
    let k_min = args.k_min.or(job.k_min).unwrap_or(2);
    let k_max = args.k_max.or(job.k_max).unwrap_or(16);
    if k_min == 0 || k_max < k_min {
        return Err(CliError::config("need 1 <= k_min <= k_max"));
    }
    if a >= k_min as f64 {
        return Err(CliError::config(format!(
            "rule amplitude a={a} makes beta_k nonpositive at k={k_min}"
        )));
    }
    Ok((k_min..=k_max)
        .map(|k| SweepRow {
            k,
            alpha: 1.0 + a / k as f64,
            beta: 1.0 - a / k as f64,
            moll_radius: moll,
        })
        .collect())
}

/// Radii ladder for the Weiss profile at a crossing a distance `dist` from
/// the pole: stay a few cells out and well clear of the pole's singularity.
fn weiss_radii(h: f64, dist: f64) -> Vec<f64> {
    let lo = (6.0 * h).max(0.15 * dist);
    let hi = 0.75 * dist;
    if hi <= lo {
        return Vec::new();
    }
    (0..8)
        .map(|k| lo + (hi - lo) * k as f64 / 7.0)
        .collect()
}

fn sweep_measurements(
    spec: &ProblemSpec,
    field: &HeightField,
    set: &MeanValueSet,
) -> SweepOutcome {
    let mut out = SweepOutcome {
        symdiff_area: Some(symmetric_difference_disk(set, spec.pole, spec.radius)),
        ..Default::default()
    };
    let mut errors: Vec<String> = Vec::new();
    match convexity_deficiency(set) {
        Ok(d) => out.deficiency = Some(d),
        Err(e) => errors.push(format!("deficiency: {e}")),
    }
    let h = spec.grid.spacing();
    let crossings = interface_crossings(set);
    match crossings.iter().cloned().fold(None, |acc: Option<f64>, x| {
        Some(acc.map_or(x, |a: f64| if x > a { x } else { a }))
    }) {
        Some(cx) => {
            match crossing_angles(set, cx, 12.0 * h) {
                Ok((up, down)) => {
                    out.theta_up = Some(up);
                    out.theta_down = Some(down);
                }
                Err(e) => errors.push(format!("angles: {e}")),
            }
            let base = Point::new(cx, 0.0);
            let radii = weiss_radii(h, base.dist(spec.pole));
            if radii.is_empty() {
                errors.push("weiss: crossing too close to the pole".to_string());
            } else {
                match weiss_profile_of_solution(field, base, &radii) {
                    Ok(profile) => {
                        let tol = 1e-3 * profile.max_abs_phi().max(f64::MIN_POSITIVE);
                        out.phi_violations = Some(profile.monotonicity_violations(tol));
                    }
                    Err(e) => errors.push(format!("weiss: {e}")),
                }
            }
        }
        None => errors.push("no interface crossing".to_string()),
    }
    if !errors.is_empty() {
        out.error = Some(errors.join("; "));
    }
    out
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let job = match &args.job {
        Some(path) => {
            let job = load_job(path)?;
            check_job_command(&job, "sweep")?;
            job
        }
        None => JobFile::default(),
    };
    let rows = sweep_schedule(&args, &job)?;
    let x0 = require(args.x0.or(job.x0.map(Point::from)), "x0")?;
    let radius = require(args.radius.or(job.radius), "R")?;
    let half_width = require(args.half_width.or(job.half_width), "M")?;
    let spacing = require(args.spacing.or(job.h), "h")?;
    let out = require(args.out.clone().or(job.out), "out")?;
    let grid = Grid::new(half_width, spacing).map_err(|e| CliError::config(e.to_string()))?;
    let options = SolveOptions {
        omega: args.omega.or(job.omega),
        tol: args.tol.or(job.tol),
        max_iter: None,
    };

    let run_row = |row: &SweepRow| -> SweepOutcome {
        let medium = match Medium::new(row.alpha, row.beta, row.moll_radius) {
            Ok(m) => m,
            Err(e) => {
                return SweepOutcome {
                    error: Some(e.to_string()),
                    ..Default::default()
                }
            }
        };
        let spec = match ProblemSpec::new(medium, x0, radius, grid) {
            Ok(s) => s,
            Err(e) => {
                return SweepOutcome {
                    error: Some(e.to_string()),
                    ..Default::default()
                }
            }
        };
        match solve_mvs_with(&spec, &options) {
            Ok((field, set)) => sweep_measurements(&spec, &field, &set),
            Err(e) => SweepOutcome {
                error: Some(e.to_string()),
                ..Default::default()
            },
        }
    };

    // Rows are independent; compute in parallel, merge in schedule order.
    let outcomes: Vec<SweepOutcome> = match args.threads.or(job.threads) {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
            pool.install(|| {
                use rayon::prelude::*;
                rows.par_iter().map(run_row).collect()
            })
        }
        None => {
            use rayon::prelude::*;
            rows.par_iter().map(run_row).collect()
        }
    };

    let path = format!("{out}.sweep.csv");
    let mut writer = csv::Writer::from_path(&path)
        .map_err(|e| CliError::config(format!("cannot write {path}: {e}")))?;
    writer
        .write_record([
            "k",
            "alpha",
            "beta",
            "s",
            "symdiff_area",
            "deficiency",
            "theta_up",
            "theta_down",
            "phi_monotone_violations",
            "error",
        ])
        .map_err(|e| CliError::config(e.to_string()))?;
    let fmt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x}"));
    let mut successes = 0usize;
    for (row, outcome) in rows.iter().zip(&outcomes) {
        if outcome.error.is_none() {
            successes += 1;
        }
        writer
            .write_record([
                row.k.to_string(),
                format!("{}", row.alpha),
                format!("{}", row.beta),
                format!("{}", row.moll_radius),
                fmt(outcome.symdiff_area),
                fmt(outcome.deficiency),
                fmt(outcome.theta_up),
                fmt(outcome.theta_down),
                outcome
                    .phi_violations
                    .map_or(String::new(), |n| n.to_string()),
                outcome.error.clone().unwrap_or_default(),
            ])
            .map_err(|e| CliError::config(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::config(e.to_string()))?;
    println!(
        "sweep: {} rows ({} ok) -> {path}",
        rows.len(),
        successes
    );
    if successes == 0 {
        return Err(CliError::numerical("every sweep row failed"));
    }
    Ok(())
}

fn cmd_catalog(args: CatalogArgs) -> Result<(), CliError> {
    let job = match &args.job {
        Some(path) => {
            let job = load_job(path)?;
            check_job_command(&job, "catalog")?;
            job
        }
        None => JobFile::default(),
    };
    let alpha = require(args.alpha.or(job.alpha), "alpha")?;
    let beta = require(args.beta.or(job.beta), "beta")?;
    let samples = args.samples.or(job.samples).unwrap_or(720).max(8);
    let out = require(args.out.or(job.out), "out")?;
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(CliError::config("alpha and beta must be positive"));
    }
    let profiles: Vec<BlowupProfile> = blowup_catalog(alpha, beta);
    artifact::write_json(Path::new(&format!("{out}.catalog.json")), &profiles)?;

    let path = format!("{out}.catalog.csv");
    let mut writer = csv::Writer::from_path(&path)
        .map_err(|e| CliError::config(format!("cannot write {path}: {e}")))?;
    writer
        .write_record(["case_id", "theta", "g"])
        .map_err(|e| CliError::config(e.to_string()))?;
    for profile in &profiles {
        for k in 0..=samples {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            writer
                .write_record([
                    profile.case_id.to_string(),
                    format!("{theta}"),
                    format!("{}", profile.eval_g(theta)),
                ])
                .map_err(|e| CliError::config(e.to_string()))?;
        }
    }
    writer.flush().map_err(|e| CliError::config(e.to_string()))?;
    let (t1, t2) = predicted_angles(alpha, beta).map_err(|e| CliError::config(e.to_string()))?;
    println!("catalog: 9 cases, theta1={t1} theta2={t2} -> {out}.catalog.json, {path}");
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let solution = artifact::read_solution(&args.input)?;
    let (spec, field, set) = solution.reconstruct()?;
    let h = spec.grid.spacing();
    println!(
        "solution: alpha={} beta={} s={} x0=({},{}) R={} M={} h={} area={} components={}",
        spec.medium.alpha,
        spec.medium.beta,
        spec.medium.moll_radius,
        spec.pole.x,
        spec.pole.y,
        spec.radius,
        spec.grid.half_width(),
        h,
        set.area,
        set.component_count
    );

    if args.symdiff {
        let sd = symmetric_difference_disk(&set, spec.pole, spec.radius);
        println!("symdiff_area={sd}");
    }
    if args.deficiency {
        let d = convexity_deficiency(&set).map_err(|e| CliError::numerical(e.to_string()))?;
        println!("deficiency={d}");
    }
    if args.angles {
        let cx = match args.crossing_x {
            Some(x) => x,
            None => *interface_crossings(&set)
                .last()
                .ok_or_else(|| CliError::numerical("no interface crossing found"))?,
        };
        let window = args.window.unwrap_or(12.0 * h);
        let (up, down) =
            crossing_angles(&set, cx, window).map_err(|e| CliError::numerical(e.to_string()))?;
        let (p1, p2) = predicted_angles(spec.medium.alpha, spec.medium.beta)
            .map_err(|e| CliError::config(e.to_string()))?;
        println!(
            "crossing_x={cx} theta_up={up} theta_down={down} predicted_theta1={p1} predicted_theta2={p2}"
        );
    }
    if args.weiss {
        let base = require(args.base, "base")?;
        let radii = parse_radii(&require(args.radii.clone(), "radii")?)?;
        let profile = weiss_profile_of_solution(&field, base, &radii)
            .map_err(|e| CliError::numerical(e.to_string()))?;
        for &(r, phi) in &profile.samples {
            println!("weiss r={r} phi={phi}");
        }
        let tol = 1e-3 * profile.max_abs_phi().max(f64::MIN_POSITIVE);
        println!(
            "weiss monotonicity_violations={} (tolerance {tol:e})",
            profile.monotonicity_violations(tol)
        );
    }
    if args.mvp {
        let test_fn = require(args.test_fn, "test-fn")?;
        let (alpha, beta) = (spec.medium.alpha, spec.medium.beta);
        let u: Box<dyn Fn(Point) -> f64> = match test_fn {
            TestFn::Const => Box::new(|_| 1.0),
            TestFn::Linear => Box::new(|p| p.x),
            TestFn::Transmission => Box::new(move |p| {
                if p.y >= 0.0 {
                    p.y / alpha
                } else {
                    p.y / beta
                }
            }),
            TestFn::Quadratic => {
                // Center below the interface when alpha >= beta (and above
                // otherwise) keeps the interface measure term nonnegative,
                // so the function is subharmonic for this medium.
                let dy = 0.75 * spec.radius;
                let z = Point::new(
                    spec.pole.x + 0.25 * spec.radius,
                    if alpha >= beta { -dy } else { dy },
                );
                Box::new(move |p| (p - z).dot(p - z))
            }
        };
        let avg = set
            .average(&u)
            .ok_or_else(|| CliError::numerical("set is empty"))?;
        let osc = set.oscillation(&u).unwrap_or(0.0);
        let value = u(spec.pole);
        println!(
            "mvp test_fn={test_fn:?} average={avg} value_at_pole={value} deviation={} oscillation={osc}",
            (avg - value).abs()
        );
    }
    Ok(())
}
