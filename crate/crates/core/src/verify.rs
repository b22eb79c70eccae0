//! Invariant suites run by `harmonic verify`. Each suite returns one
//! [`CheckResult`] per checked quantity; nothing here panics on failure.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embedding::{
    basic_commutativity_check, circle_check, congruence_recover, embedding_constants, l2_radiality_check,
    s2_explicit_embedding_with, Eigenfunction, S2Options, ScrewCurve, ZonalSum, COMMUTATIVITY_TOL, MINIMALITY_TOL,
    RADIALITY_TOL,
};
use crate::error::{Error, Result};
use crate::jacobi::{
    integrate_jacobi, integrate_jacobi_on, involution_symmetry_check, mean_curvature_profile,
    ricci_from_mean_curvature, volume_density_profile, CurvatureField, JacobiOptions,
};
use crate::model_spaces::{ExponentPair, ModelSpace};
use crate::poly::CosPolynomial;
use crate::radial_ode::{
    phi_polynomial, phi_residual, solve_phi, solve_phi_with, PhiOptions, PhiSource, RadialOdeProblem,
};
use crate::report::CheckResult;
use crate::trig_poly::{cos_multiple_angle, fit_density_form, gauss_lucas_check, interlacing_check};

pub const DENSITY_TOL: f64 = 1e-8;
pub const RICCI_TOL: f64 = 1e-6;
pub const FIT_TOL: f64 = 1e-6;
pub const CONSERVATION_TOL: f64 = 1e-8;
pub const ODE_MATCH_TOL: f64 = 1e-6;
pub const LAUNCH_TOL: f64 = 1e-8;
pub const ROOT_GAP_TOL: f64 = 1e-8;
pub const GAUSS_LUCAS_TOL: f64 = 1e-6;
pub const CIRCLE_TOL: f64 = 1e-9;
pub const MULTIPLE_ANGLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Density,
    Ode,
    Roots,
    Embedding,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Density => "density",
            Suite::Ode => "ode",
            Suite::Roots => "roots",
            Suite::Embedding => "embedding",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "density" => Suite::Density,
            "ode" => Suite::Ode,
            "roots" => Suite::Roots,
            "embedding" => Suite::Embedding,
            "all" => Suite::All,
            _ => return Err(Error::InvalidArgument(format!("unknown suite '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Size of the randomized suites.
    pub cases: usize,
    /// Largest real dimension in the catalog sweep.
    pub max_n: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, cases: 500, max_n: 16 }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<CheckResult> {
    match suite {
        Suite::Density => density_suite(opts),
        Suite::Ode => ode_suite(opts),
        Suite::Roots => roots_suite(opts),
        Suite::Embedding => embedding_suite(opts),
        Suite::All => {
            // suites are independent; run them side by side and concatenate in order
            let suites = [Suite::Density, Suite::Ode, Suite::Roots, Suite::Embedding];
            std::thread::scope(|scope| {
                let handles: Vec<_> = suites.iter().map(|&s| scope.spawn(move || run_suite(s, opts))).collect();
                handles.into_iter().flat_map(|h| h.join().expect("suite thread panicked")).collect()
            })
        }
    }
}

/// Distinct exponent pairs of the compact catalog, with one representative space each.
pub fn catalog_pairs(max_n: u32) -> Vec<(ModelSpace, ExponentPair)> {
    let mut out: Vec<(ModelSpace, ExponentPair)> = Vec::new();
    for space in ModelSpace::compact_catalog(max_n) {
        let e = space.exponents().expect("compact spaces have exponents");
        if !out.iter().any(|(_, f)| *f == e) {
            out.push((space, e));
        }
    }
    out
}

fn record(name: String, outcome: Result<f64>, tol: f64) -> CheckResult {
    match outcome {
        Ok(v) => CheckResult::new(name, v, tol),
        Err(e) => CheckResult::failed(name, &e.to_string()),
    }
}

/// Jacobi-pipeline densities against the closed-form table, Ricci extraction,
/// density-form recovery and the conserved section under random fields.
pub fn density_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let compact_radii: Vec<f64> = (0..30).map(|i| 0.1 + (PI - 0.2) * i as f64 / 29.0).collect();
    for space in ModelSpace::compact_catalog(opts.max_n) {
        out.push(record(format!("density.{space}.table"), density_error(&space, &compact_radii), DENSITY_TOL));
    }
    let open_radii: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
    for space in ModelSpace::noncompact_catalog(opts.max_n) {
        out.push(record(format!("density.{space}.table"), density_error(&space, &open_radii), DENSITY_TOL));
    }
    for space in ModelSpace::compact_catalog(opts.max_n) {
        out.push(record(format!("density.{space}.ricci"), ricci_error(&space), RICCI_TOL));
        out.push(record(format!("density.{space}.form_fit"), form_fit_error(&space), FIT_TOL));
    }
    out.push(record("density.conserved_section".into(), conservation_drift(opts), CONSERVATION_TOL));
    out
}

/// Largest relative error of `det J` against the closed form at `radii`.
pub fn density_error(space: &ModelSpace, radii: &[f64]) -> Result<f64> {
    let field = CurvatureField::for_space(space);
    let traj = integrate_jacobi_on(&field, radii, JacobiOptions::default())?;
    let mut worst = 0.0f64;
    for (r, det) in radii.iter().zip(traj.determinants()) {
        let exact = space.closed_form_density(*r)?;
        worst = worst.max(((det - exact) / exact).abs());
    }
    Ok(worst)
}

pub fn ricci_error(space: &ModelSpace) -> Result<f64> {
    let traj = integrate_jacobi(&CurvatureField::for_space(space), 1.0, 1025)?;
    let h = mean_curvature_profile(&traj)?;
    let ric = ricci_from_mean_curvature(&h, space.n() as usize)?;
    let exact = space.ricci()?.to_f64().unwrap_or(f64::NAN);
    Ok((ric - exact).abs())
}

/// Fit residual when the recovered exponents are exact; an error otherwise.
pub fn form_fit_error(space: &ModelSpace) -> Result<f64> {
    let traj = integrate_jacobi(&CurvatureField::for_space(space), PI, 513)?;
    let fit = fit_density_form(&volume_density_profile(&traj)?)?;
    let expected = space.exponents()?;
    let got = fit.exponents()?;
    if got != expected {
        return Err(Error::InconsistentExponents {
            alpha: got.alpha().to_string(),
            beta: got.beta().to_string(),
            n: space.n() as i64,
        });
    }
    Ok(fit.residual)
}

/// Random smooth symmetric field `A + B sin(w t) + C t^2 / 2` of dimension 2 to 5.
pub fn random_curvature_field(rng: &mut ChaCha8Rng) -> CurvatureField {
    let dim = rng.random_range(2..=5);
    let mut sym = || {
        let m = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
        (&m + m.transpose()) * 0.5
    };
    let (a, b, c) = (sym(), sym(), sym());
    let w = rng.random_range(0.5..3.0);
    CurvatureField::from_fn(dim, move |t| &a + &b * (w * t).sin() + &c * (0.5 * t * t))
}

/// Largest drift of `(J^T)' K - J^T K'` over `max(cases / 10, 1)` random fields.
pub fn conservation_drift(opts: &VerifyOptions) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..(opts.cases / 10).max(1) {
        let field = random_curvature_field(&mut rng);
        let r = rng.random_range(0.5..1.5);
        worst = worst.max(involution_symmetry_check(&field, r)?.conserved_drift);
    }
    Ok(worst)
}

fn big(r: num_rational::Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Numeric against exact eigenfunctions, spectrum and Ros identities.
pub fn ode_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (space, e) in catalog_pairs(opts.max_n) {
        let tag = format!("({}, {})", e.alpha(), e.beta());
        let mut worst = Ok(0.0f64);
        let mut residual = Ok(0.0f64);
        for k in 1..=8 {
            let step = (|| -> Result<(f64, f64)> {
                let problem = RadialOdeProblem::at_eigenvalue(e, k)?;
                let sol = solve_phi(&problem, 401)?;
                if !sol.regular_at_far_end {
                    return Err(Error::Divergence { r: PI, reason: format!("k = {k} not regular at pi") });
                }
                let p = phi_polynomial(&e, k)?.to_f64();
                let scale = 1.0 + problem.lambda;
                Ok((sol.max_difference(&p), phi_residual(PhiSource::Polynomial(&p), &problem) / scale))
            })();
            match step {
                Ok((d, res)) => {
                    worst = worst.map(|w| w.max(d));
                    residual = residual.map(|w| w.max(res));
                }
                Err(err) => {
                    worst = Err(err.clone());
                    residual = Err(err);
                    break;
                }
            }
        }
        out.push(record(format!("ode.{tag}.numeric_vs_exact"), worst, ODE_MATCH_TOL));
        out.push(record(format!("ode.{tag}.polynomial_residual"), residual, 1e-9));

        // k = 1 coefficients in rational arithmetic
        let first = phi_polynomial(&e, 1).map(|p| {
            let l1 = big(e.first_eigenvalue());
            let b = big(e.beta());
            let denom = &l1 + &b;
            p.coeffs() == [&b / &denom, &l1 / &denom]
        });
        out.push(match first {
            Ok(ok) => CheckResult::boolean(format!("ode.{tag}.first_coefficients"), ok),
            Err(err) => CheckResult::failed(format!("ode.{tag}.first_coefficients"), &err.to_string()),
        });

        let n = space.n() as i64;
        out.push(match e.ros_equality_check(n) {
            Ok(ok) => CheckResult::boolean(format!("ode.{tag}.ros_equality"), ok),
            Err(err) => CheckResult::failed(format!("ode.{tag}.ros_equality"), &err.to_string()),
        });

        out.push(record(format!("ode.{tag}.launch_radius"), launch_radius_spread(&e), LAUNCH_TOL));
        out.push(record(format!("ode.{tag}.bracketing"), bracketing_defect(&e), 0.0));
    }
    for n in 2..=opts.max_n as i64 {
        let e = ExponentPair::from_integers(n - 1, 0).expect("valid pair");
        let ok = (0..=10u32).all(|k| {
            let k64 = k as i64;
            e.spectrum(k) == num_rational::Rational64::from_integer(k64 * (k64 + n - 1))
        });
        out.push(CheckResult::boolean(format!("ode.sphere:{n}.spectrum"), ok));
    }
    out
}

/// `max |Phi_eps1 - Phi_eps2|` for launch radii `1e-3` and `1e-4` at `lambda_2`.
pub fn launch_radius_spread(e: &ExponentPair) -> Result<f64> {
    let problem = RadialOdeProblem::at_eigenvalue(*e, 2)?;
    let a = solve_phi_with(&problem, 201, PhiOptions { launch_radius: 1e-3, ..Default::default() })?;
    let b = solve_phi_with(&problem, 201, PhiOptions { launch_radius: 1e-4, ..Default::default() })?;
    Ok(a.phi.values.iter().zip(&b.phi.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// Zero when every `lambda_k` (k = 1, 2) is accepted as regular and the midpoints
/// between consecutive eigenvalues are rejected; one otherwise.
pub fn bracketing_defect(e: &ExponentPair) -> Result<f64> {
    let mut bad = 0;
    for k in 1..=2u32 {
        let lk = e.spectrum(k).to_f64().unwrap_or(f64::NAN);
        let next = e.spectrum(k + 1).to_f64().unwrap_or(f64::NAN);
        let at = solve_phi(&RadialOdeProblem::new(*e, lk)?, 201)?;
        let between = solve_phi(&RadialOdeProblem::new(*e, 0.5 * (lk + next))?, 201)?;
        if !at.regular_at_far_end || between.regular_at_far_end {
            bad += 1;
        }
    }
    Ok(bad as f64)
}

/// Interlacing for `Phi_{lambda_k}`, Gauss-Lucas on random polynomials and the
/// multiple-angle expansion.
pub fn roots_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (_, e) in catalog_pairs(opts.max_n) {
        let tag = format!("({}, {})", e.alpha(), e.beta());
        let mut failures = Vec::new();
        for k in 2..=10 {
            match phi_polynomial(&e, k).and_then(|p| interlacing_check(&p.to_f64(), ROOT_GAP_TOL)) {
                Ok(true) => {}
                Ok(false) => failures.push(format!("k={k}")),
                Err(err) => failures.push(format!("k={k}: {err}")),
            }
        }
        out.push(if failures.is_empty() {
            CheckResult::boolean(format!("roots.{tag}.interlacing"), true)
        } else {
            CheckResult::failed(format!("roots.{tag}.interlacing"), &failures.join("; "))
        });
    }
    out.push(record("roots.gauss_lucas_random".into(), gauss_lucas_failures(opts), 0.0));
    out.push(record("roots.multiple_angle".into(), multiple_angle_error(20), MULTIPLE_ANGLE_TOL));
    out
}

/// Random polynomial of degree 2..=12 with coefficients in `[-1, 1]` and a leading
/// coefficient bounded away from zero.
pub fn random_polynomial(rng: &mut ChaCha8Rng) -> CosPolynomial<f64> {
    let deg = rng.random_range(2..=12);
    let mut c: Vec<f64> = (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect();
    let lead: f64 = rng.random_range(0.25..1.0);
    c[deg] = if rng.random_bool(0.5) { lead } else { -lead };
    CosPolynomial::new(c)
}

/// Number of random polynomials failing Gauss-Lucas.
pub fn gauss_lucas_failures(opts: &VerifyOptions) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
    let mut failures = 0usize;
    for _ in 0..opts.cases {
        if !gauss_lucas_check(&random_polynomial(&mut rng), GAUSS_LUCAS_TOL)? {
            failures += 1;
        }
    }
    Ok(failures as f64)
}

/// `max |T_m(cos r) - cos(m r)|` for `m <= max_m` at 64 radii.
pub fn multiple_angle_error(max_m: u32) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in 1..=max_m {
        let p = cos_multiple_angle(m)?.to_f64();
        for i in 0..64 {
            let r = PI * i as f64 / 63.0;
            worst = worst.max((p.value_at_radius(r) - (m as f64 * r).cos()).abs());
        }
    }
    Ok(worst)
}

/// Minimality, circle radius, the `S^2` embedding, basic commutativity and radiality.
pub fn embedding_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (_, e) in catalog_pairs(opts.max_n) {
        let tag = format!("({}, {})", e.alpha(), e.beta());
        for k in 1..=3 {
            let defect = Eigenfunction::new(&e, k)
                .and_then(|phi| embedding_constants(&e, &phi))
                .map(|c| c.minimality_defect.unwrap_or(f64::INFINITY));
            out.push(record(format!("embedding.{tag}.minimality_k{k}"), defect, MINIMALITY_TOL));
        }
        match circle_check(&e) {
            Ok(c) => {
                out.push(CheckResult::new(format!("embedding.{tag}.circle_radius"), (c.radius - 1.0).abs(), CIRCLE_TOL));
                out.push(CheckResult::new(
                    format!("embedding.{tag}.circle_formula_radius"),
                    (c.formula_radius - 1.0).abs(),
                    CIRCLE_TOL,
                ));
                out.push(CheckResult::new(format!("embedding.{tag}.circle_fit"), c.max_deviation, CIRCLE_TOL));
            }
            Err(err) => out.push(CheckResult::failed(format!("embedding.{tag}.circle"), &err.to_string())),
        }
    }

    match s2_explicit_embedding_with(S2Options { seed: opts.seed, ..S2Options::default() }) {
        Ok(rep) => out.extend(rep.checks.into_iter().map(|mut c| {
            c.check = format!("embedding.{}", c.check);
            c
        })),
        Err(err) => out.push(CheckResult::failed("embedding.s2", &err.to_string())),
    }

    out.push(record("embedding.congruence_random_rotation".into(), rotated_circle_residual(opts.seed), 1e-9));

    for (name, f, p) in commutativity_corpus() {
        out.push(record(format!("embedding.commutativity.{name}"), basic_commutativity_check(&f, p, 64), COMMUTATIVITY_TOL));
    }

    let s2 = ExponentPair::from_integers(1, 0).expect("valid pair");
    let radiality = (|| -> Result<Vec<(String, f64)>> {
        let phi1 = phi_polynomial(&s2, 1)?.to_f64();
        let phi2 = phi_polynomial(&s2, 2)?.to_f64();
        let a = l2_radiality_check(&phi1, &phi1, PI / 2.0)?;
        let b = l2_radiality_check(&phi1, &phi2, PI / 3.0)?;
        let one = CosPolynomial::constant(1.0);
        let c = l2_radiality_check(&one, &one, 1.0)?;
        Ok(vec![
            ("phi1_phi1.spread".into(), a.spread),
            ("phi1_phi1.formula".into(), a.formula_defect.unwrap_or(f64::INFINITY)),
            ("phi1_phi2.spread".into(), b.spread),
            ("one_one.volume".into(), (c.mean - 4.0 * PI).abs()),
        ])
    })();
    match radiality {
        Ok(v) => out.extend(v.into_iter().map(|(n, d)| CheckResult::new(format!("embedding.radiality.{n}"), d, RADIALITY_TOL))),
        Err(err) => out.push(CheckResult::failed("embedding.radiality", &err.to_string())),
    }
    out
}

/// Spherical-harmonic test functions and base points.
pub fn commutativity_corpus() -> Vec<(&'static str, ZonalSum, [f64; 3])> {
    let north = [0.0, 0.0, 1.0];
    vec![
        ("y2_north", ZonalSum::new().term(1.0, 2, north), north),
        ("constant", ZonalSum::new().term(1.0, 0, north), [0.6, 0.0, 0.8]),
        ("y1_plus_y3", ZonalSum::new().term(1.0, 1, north).term(1.0, 3, north), north),
        ("y1_plus_y3_offaxis", ZonalSum::new().term(1.0, 1, north).term(1.0, 3, north), [0.3, -0.5, 0.4]),
        (
            "tilted_mixture",
            ZonalSum::new().term(0.7, 2, [1.0, 1.0, 0.0]).term(-1.2, 4, [0.2, -0.3, 1.0]).term(0.4, 5, [0.0, 1.0, 0.5]),
            [-0.4, 0.8, 0.2],
        ),
    ]
}

/// Residual of recovering a random orthogonal image of the unit circle in `R^4`.
pub fn rotated_circle_residual(seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let circle = ScrewCurve::sample(|s| vec![s.cos(), s.sin(), 0.0, 0.0], 2.0 * PI, 128)?;
    let q = DMatrix::<f64>::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0)).qr().q();
    let points = circle
        .points
        .iter()
        .map(|p| (&q * nalgebra::DVector::from_column_slice(p)).iter().copied().collect())
        .collect();
    let moved = ScrewCurve::new(circle.params.clone(), points)?;
    Ok(congruence_recover(&circle, &moved)?.residual)
}
