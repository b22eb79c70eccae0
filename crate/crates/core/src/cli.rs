//! Command implementations behind the `harmonic` binary. Each returns a
//! [`RunReport`]; argument parsing and exit codes live in the binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::embedding::{s2_explicit_embedding_with, S2Options, ScrewFormula};
use crate::error::{Error, Result};
use crate::jacobi::{integrate_jacobi_on, CurvatureField, JacobiOptions};
use crate::model_spaces::{ExponentPair, ModelSpace};
use crate::profile::format_float;
use crate::radial_ode::{phi_polynomial, phi_residual, solve_phi, PhiSource, RadialOdeProblem};
use crate::report::{CheckResult, RunReport};
use crate::trig_poly::interlacing_check;
use crate::verify::{run_suite, Suite, VerifyOptions};

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct CommonOptions {
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub cases: Option<usize>,
    pub out: Option<PathBuf>,
}

impl CommonOptions {
    fn out_dir(&self) -> Result<Option<&Path>> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir)?;
        }
        Ok(self.out.as_deref())
    }
}

/// True for errors caused by bad input rather than a failed computation.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidSpaceId(_)
            | Error::InvalidSpace(_)
            | Error::InvalidArgument(_)
            | Error::InvalidExponents(_)
            | Error::UnsupportedSpace(_)
            | Error::InsufficientResolution(_)
    )
}

fn file_stem(space: &ModelSpace) -> String {
    space.to_string().replace(':', "")
}

pub const DENSITY_DEFAULT_GRID: usize = 256;
pub const DENSITY_DEFAULT_TOL: f64 = 1e-8;
const NONCOMPACT_RANGE: f64 = 3.0;

/// Numeric against closed-form `r^(n-1) omega` on `grid` interior radii.
/// CSV columns: `r,numeric,closed_form,rel_error`.
pub fn cmd_density(space_id: &str, opts: &CommonOptions) -> Result<RunReport> {
    let started = Instant::now();
    let space: ModelSpace = space_id.parse()?;
    let size = opts.grid.unwrap_or(DENSITY_DEFAULT_GRID);
    if size < 2 {
        return Err(Error::InvalidArgument(format!("grid must be at least 2, got {size}")));
    }
    let tol = opts.tol.unwrap_or(DENSITY_DEFAULT_TOL);
    let radii: Vec<f64> = match space.diameter() {
        Some(d) => (1..=size).map(|i| d * i as f64 / (size + 1) as f64).collect(),
        None => (1..=size).map(|i| NONCOMPACT_RANGE * i as f64 / size as f64).collect(),
    };
    let traj = integrate_jacobi_on(&CurvatureField::for_space(&space), &radii, JacobiOptions::default())?;
    let dets = traj.determinants();
    let mut csv = String::from("r,numeric,closed_form,rel_error\n");
    let mut worst = 0.0f64;
    for (&r, &det) in radii.iter().zip(&dets) {
        let exact = space.closed_form_density(r)?;
        let rel = ((det - exact) / exact).abs();
        worst = worst.max(rel);
        csv.push_str(&format!("{},{},{},{}\n", format_float(r), format_float(det), format_float(exact), format_float(rel)));
    }

    let mut report = RunReport::new("density");
    report.param("space", space.to_string()).param("grid", size).param("tol", tol);
    report.push(CheckResult::new("max_rel_error", worst, tol));
    if let Some(dir) = opts.out_dir()? {
        fs::write(dir.join(format!("density_{}.csv", file_stem(&space))), csv)?;
    }
    report.finish(started);
    Ok(report)
}

pub const PHI_DEFAULT_GRID: usize = 401;
pub const PHI_MATCH_TOL: f64 = 1e-6;
pub const PHI_RESIDUAL_TOL: f64 = 1e-9;
pub const PHI_ROOT_GAP: f64 = 1e-8;

/// Exact `Phi_{lambda_k}`, the numeric solution, residual and interlacing.
/// Writes `phi_<space>_k<k>.json` (coefficients) and `.csv` (`r,phi,dphi,exact`).
pub fn cmd_phi(space_id: &str, k: u32, opts: &CommonOptions) -> Result<RunReport> {
    let started = Instant::now();
    let space: ModelSpace = space_id.parse()?;
    let exponents = space.exponents()?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let size = opts.grid.unwrap_or(PHI_DEFAULT_GRID);
    let exact = phi_polynomial(&exponents, k)?;
    let poly = exact.to_f64();
    let problem = RadialOdeProblem::at_eigenvalue(exponents, k)?;
    let sol = solve_phi(&problem, size)?;

    let mut report = RunReport::new("phi");
    report
        .param("space", space.to_string())
        .param("k", k)
        .param("alpha", exponents.alpha().to_string())
        .param("beta", exponents.beta().to_string())
        .param("lambda", exponents.spectrum(k).to_string())
        .param("coefficients", exact.exact_strings())
        .param("grid", size);
    let residual = phi_residual(PhiSource::Polynomial(&poly), &problem) / (1.0 + problem.lambda);
    report.push(CheckResult::new("polynomial_residual", residual, opts.tol.unwrap_or(PHI_RESIDUAL_TOL)));
    report.push(CheckResult::new("numeric_vs_exact", sol.max_difference(&poly), PHI_MATCH_TOL));
    report.push(CheckResult::boolean("regular_at_pi", sol.regular_at_far_end));
    report.push(match interlacing_check(&poly, PHI_ROOT_GAP) {
        Ok(ok) => CheckResult::boolean("interlacing", ok),
        Err(e) => CheckResult::failed("interlacing", &e.to_string()),
    });

    if let Some(dir) = opts.out_dir()? {
        let stem = format!("phi_{}_k{k}", file_stem(&space));
        let json = serde_json::to_string_pretty(&exact.to_json_value())?;
        fs::write(dir.join(format!("{stem}.json")), json)?;
        let mut csv = String::from("r,phi,dphi,exact\n");
        for (i, r) in sol.phi.grid.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                format_float(*r),
                format_float(sol.phi.values[i]),
                format_float(sol.dphi.values[i]),
                format_float(poly.value_at_radius(*r))
            ));
        }
        fs::write(dir.join(format!("{stem}.csv")), csv)?;
    }
    report.finish(started);
    Ok(report)
}

pub fn cmd_verify(suite: &str, opts: &CommonOptions) -> Result<RunReport> {
    let started = Instant::now();
    let suite: Suite = suite.parse()?;
    let vopts = VerifyOptions { seed: opts.seed, cases: opts.cases.unwrap_or(500), ..VerifyOptions::default() };
    if vopts.cases == 0 {
        return Err(Error::InvalidArgument("cases must be positive".into()));
    }
    let mut report = RunReport::new("verify");
    report.param("suite", suite.name()).param("seed", vopts.seed).param("cases", vopts.cases);
    report.extend(run_suite(suite, &vopts));
    if let Some(dir) = opts.out_dir()? {
        fs::write(dir.join(format!("verify_{}.json", suite.name())), report.to_json())?;
    }
    report.finish(started);
    Ok(report)
}

pub const EMBED_DEFAULT_RESOLUTION: usize = 64;

/// Explicit embedding of `S^2`. Writes `geodesic_<i>.csv` (`s,x1,x2,x3`) and
/// `screw_function.csv` (`s,formula,measured`).
pub fn cmd_embed_s2(resolution: Option<usize>, opts: &CommonOptions) -> Result<RunReport> {
    let started = Instant::now();
    let resolution = resolution.or(opts.grid).unwrap_or(EMBED_DEFAULT_RESOLUTION);
    let s2opts = S2Options { resolution, seed: opts.seed, ..S2Options::default() };
    let rep = s2_explicit_embedding_with(s2opts)?;
    let mut report = RunReport::new("embed-s2");
    report
        .param("resolution", resolution)
        .param("seed", opts.seed)
        .param("geodesic_samples", s2opts.geodesic_samples)
        .param("image_radius", rep.image_radius);
    report.extend(rep.checks.iter().cloned());
    if let Some(dir) = opts.out_dir()? {
        for (i, g) in rep.geodesics.iter().enumerate() {
            g.write_csv(&dir.join(format!("geodesic_{i}.csv")))?;
        }
        let screw = ScrewFormula::new(&ExponentPair::from_integers(1, 0)?, 1)?;
        let first = &rep.geodesics[0];
        let measured = first.screw_function();
        let mut csv = String::from("s,formula,measured\n");
        for (s, m) in first.params.iter().zip(&measured) {
            csv.push_str(&format!("{},{},{}\n", format_float(*s), format_float(screw.eval(*s)), format_float(*m)));
        }
        fs::write(dir.join("screw_function.csv"), csv)?;
    }
    report.finish(started);
    Ok(report)
}
