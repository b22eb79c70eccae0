//! Weighted norms, embedding constants, screw lines and the explicit
//! eigenfunction embedding of the round 2-sphere.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector, Vector3};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_spaces::ExponentPair;
use crate::poly::CosPolynomial;
use crate::profile::format_float;
use crate::quadrature::{legendre, GaussLegendre};
use crate::radial_ode::{phi_polynomial, PhiSolution};
use crate::report::CheckResult;

/// A function of the distance from a base point.
pub trait RadialFunction {
    fn value(&self, r: f64) -> f64;
    fn slope(&self, r: f64) -> f64;
    /// Eigenvalue if the function is known to be a radial eigenfunction.
    fn eigenvalue(&self) -> Option<f64> {
        None
    }
}

impl RadialFunction for CosPolynomial<f64> {
    fn value(&self, r: f64) -> f64 {
        self.value_at_radius(r)
    }
    fn slope(&self, r: f64) -> f64 {
        self.slope_at_radius(r)
    }
}

impl RadialFunction for PhiSolution {
    fn value(&self, r: f64) -> f64 {
        self.interpolate(r).0
    }
    fn slope(&self, r: f64) -> f64 {
        self.interpolate(r).1
    }
    fn eigenvalue(&self) -> Option<f64> {
        self.regular_at_far_end.then_some(self.lambda)
    }
}

/// Exact radial eigenfunction `Phi_{lambda_k}` in floating point.
#[derive(Debug, Clone, Serialize)]
pub struct Eigenfunction {
    pub k: u32,
    pub lambda: f64,
    pub poly: CosPolynomial<f64>,
}

impl Eigenfunction {
    pub fn new(exponents: &ExponentPair, k: u32) -> Result<Self> {
        let poly = phi_polynomial(exponents, k)?.to_f64();
        let lambda = exponents.spectrum(k).to_f64().unwrap_or(f64::NAN);
        Ok(Eigenfunction { k, lambda, poly })
    }
}

impl RadialFunction for Eigenfunction {
    fn value(&self, r: f64) -> f64 {
        self.poly.value_at_radius(r)
    }
    fn slope(&self, r: f64) -> f64 {
        self.poly.slope_at_radius(r)
    }
    fn eigenvalue(&self) -> Option<f64> {
        Some(self.lambda)
    }
}

/// Volume of the unit sphere `S^k`, by `vol(S^k) = 2 pi vol(S^{k-2}) / (k - 1)`.
pub fn sphere_volume(k: u32) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI * sphere_volume(k - 2) / (k - 1) as f64,
    }
}

/// `||G||_d^2 = int_0^pi G^2 2^beta (1 - cos)^beta sin^alpha dr`.
#[derive(Debug, Clone)]
pub struct WeightedNorm {
    pub exponents: ExponentPair,
    pub rule: GaussLegendre,
}

impl WeightedNorm {
    pub const DEFAULT_NODES: usize = 256;

    pub fn new(exponents: ExponentPair) -> Self {
        Self::with_nodes(exponents, Self::DEFAULT_NODES)
    }

    pub fn with_nodes(exponents: ExponentPair, nodes: usize) -> Self {
        WeightedNorm { exponents, rule: GaussLegendre::on_interval(nodes, 0.0, PI) }
    }

    pub fn inner<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(&self, f: F, g: G) -> f64 {
        self.rule.integrate(|r| f(r) * g(r) * self.exponents.density(r))
    }

    pub fn norm_squared<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.inner(&f, &f)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingConstants {
    /// `c_G = sqrt(n) / (||G'||_d sqrt(vol S^{n-1}))`.
    pub c_g: f64,
    /// `C_G = sqrt(n) ||G||_d / ||G'||_d`, the radius of the image sphere.
    pub big_c_g: f64,
    pub n: u32,
    pub lambda: Option<f64>,
    pub norm: f64,
    pub slope_norm: f64,
    /// `|lambda C_G^2 - n|` when `G` is an eigenfunction.
    pub minimality_defect: Option<f64>,
}

pub const MINIMALITY_TOL: f64 = 1e-8;

pub fn embedding_constants<G: RadialFunction + ?Sized>(exponents: &ExponentPair, g: &G) -> Result<EmbeddingConstants> {
    embedding_constants_with(&WeightedNorm::new(*exponents), g)
}

pub fn embedding_constants_with<G: RadialFunction + ?Sized>(norm: &WeightedNorm, g: &G) -> Result<EmbeddingConstants> {
    let n = norm.exponents.integer_dimension()?;
    let gg = norm.norm_squared(|r| g.value(r)).sqrt();
    let dd = norm.norm_squared(|r| g.slope(r)).sqrt();
    if !(dd > 1e-300) || dd <= 1e-14 * gg {
        return Err(Error::ConstantProfile);
    }
    let nf = n as f64;
    let big_c_g = nf.sqrt() * gg / dd;
    let c_g = nf.sqrt() / (dd * sphere_volume(n - 1).sqrt());
    let lambda = g.eigenvalue();
    let minimality_defect = lambda.map(|l| (l * big_c_g * big_c_g - nf).abs());
    Ok(EmbeddingConstants { c_g, big_c_g, n, lambda, norm: gg, slope_norm: dd, minimality_defect })
}

/// Distance between `gamma(0)` and `gamma(s)` along a closed unit-speed geodesic of length `2 pi`.
pub fn geodesic_distance(s: f64) -> f64 {
    PI - (PI - s.abs().rem_euclid(2.0 * PI)).abs()
}

/// Screw function `S_0(s) = 2 C^2 - 2 C^2 Phi_{lambda_k}(delta(s))` of the `k`-th eigenfunction embedding.
///
/// Evaluated as `2 C^2 (1 - cos delta) R(cos delta)` with `1 - Phi = (1 - x) R(x)`
/// divided out exactly, so `S_0(0) = 0` holds to the bit and small `s` keeps
/// full relative accuracy.
#[derive(Debug, Clone, Serialize)]
pub struct ScrewFormula {
    pub eigenfunction: Eigenfunction,
    pub c_squared: f64,
    quotient: CosPolynomial<f64>,
}

impl ScrewFormula {
    pub fn new(exponents: &ExponentPair, k: u32) -> Result<Self> {
        let exact = phi_polynomial(exponents, k)?;
        let eigenfunction = Eigenfunction::new(exponents, k)?;
        let c = embedding_constants(exponents, &eigenfunction)?;
        // 1 - P(x) = (x - 1) T(x); R = -T
        let mut q: Vec<BigRational> = exact.coeffs().iter().map(|c| -c.clone()).collect();
        q[0] += BigRational::one();
        let deg = q.len() - 1;
        let mut t = vec![BigRational::zero(); deg];
        let mut carry = BigRational::zero();
        for i in (1..=deg).rev() {
            carry = &q[i] + carry;
            t[i - 1] = carry.clone();
        }
        let quotient = CosPolynomial::new(t.into_iter().map(|c| -c).collect::<Vec<_>>()).to_f64();
        Ok(ScrewFormula { eigenfunction, c_squared: c.big_c_g * c.big_c_g, quotient })
    }

    pub fn eval(&self, s: f64) -> f64 {
        let d = geodesic_distance(s);
        let one_minus_cos = 2.0 * (0.5 * d).sin().powi(2);
        2.0 * self.c_squared * one_minus_cos * self.quotient.eval(d.cos())
    }
}

pub fn screw_function_from_formula(exponents: &ExponentPair, k: u32, s: f64) -> Result<f64> {
    Ok(ScrewFormula::new(exponents, k)?.eval(s))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CircleCheck {
    /// Least-squares fit of `S_0` to `2 rho^2 (1 - cos s)`.
    pub radius: f64,
    /// `sqrt(lambda_1 / (lambda_1 + beta)) C_Phi`.
    pub formula_radius: f64,
    pub max_deviation: f64,
}

pub const CIRCLE_SAMPLES: usize = 512;

pub fn circle_check(exponents: &ExponentPair) -> Result<CircleCheck> {
    let screw = ScrewFormula::new(exponents, 1)?;
    let (mut sg, mut gg) = (0.0, 0.0);
    let samples: Vec<(f64, f64)> = (0..CIRCLE_SAMPLES)
        .map(|i| {
            let s = 2.0 * PI * i as f64 / CIRCLE_SAMPLES as f64;
            (s, screw.eval(s))
        })
        .collect();
    for &(s, v) in &samples {
        let g = 2.0 * (1.0 - s.cos());
        sg += v * g;
        gg += g * g;
    }
    let rho2 = sg / gg;
    let max_deviation = samples
        .iter()
        .map(|&(s, v)| (v - 2.0 * rho2 * (1.0 - s.cos())).abs())
        .fold(0.0, f64::max);
    let l1 = screw.eigenfunction.lambda;
    let beta = exponents.beta_f64();
    let formula_radius = (l1 / (l1 + beta)).sqrt() * screw.c_squared.sqrt();
    Ok(CircleCheck { radius: rho2.sqrt(), formula_radius, max_deviation })
}

/// A sampled curve in `R^N`.
#[derive(Debug, Clone, Serialize)]
pub struct ScrewCurve {
    pub params: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl ScrewCurve {
    pub fn new(params: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::DimensionMismatch { expected: params.len(), got: points.len() });
        }
        if params.len() < 2 {
            return Err(Error::InvalidArgument("a screw curve needs at least two samples".into()));
        }
        let dim = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
        Ok(ScrewCurve { params, points })
    }

    /// Samples `f` at `count` uniform parameters over `[0, period)`.
    pub fn sample<F: FnMut(f64) -> Vec<f64>>(mut f: F, period: f64, count: usize) -> Result<Self> {
        let params: Vec<f64> = (0..count).map(|i| period * i as f64 / count as f64).collect();
        let points = params.iter().map(|&s| f(s)).collect();
        Self::new(params, points)
    }

    pub fn dimension(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// `||c(s_j) - c(s_0)||^2` for every sample `j`.
    pub fn screw_function(&self) -> Vec<f64> {
        self.points.iter().map(|p| dist2(p, &self.points[0])).collect()
    }

    /// `max |‖c(s_i + s_j) - c(s_i)‖^2 - S_0(s_j)|` over index pairs, treating the
    /// samples as one period when `periodic` is set.
    pub fn stationarity_deviation(&self, periodic: bool) -> f64 {
        let s0 = self.screw_function();
        let n = self.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for (j, &s) in s0.iter().enumerate() {
                let k = i + j;
                let k = if k < n {
                    k
                } else if periodic {
                    k - n
                } else {
                    break;
                };
                worst = worst.max((dist2(&self.points[k], &self.points[i]) - s).abs());
            }
        }
        worst
    }

    /// Like [`stationarity_deviation`](Self::stationarity_deviation) but against an external `S_0`.
    pub fn deviation_from<F: Fn(f64) -> f64>(&self, screw: F) -> f64 {
        let n = self.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let d = self.params[j] - self.params[i];
                worst = worst.max((dist2(&self.points[j], &self.points[i]) - screw(d)).abs());
            }
        }
        worst
    }

    /// Center and mean radius of the best circle through the samples, plus the
    /// largest distance from that circle (planar offset included).
    pub fn circle_fit(&self) -> (Vec<f64>, f64, f64) {
        let dim = self.dimension();
        let n = self.len() as f64;
        let mut center = vec![0.0; dim];
        for p in &self.points {
            for (c, x) in center.iter_mut().zip(p) {
                *c += x / n;
            }
        }
        let radii: Vec<f64> = self.points.iter().map(|p| dist2(p, &center).sqrt()).collect();
        let radius = radii.iter().sum::<f64>() / n;
        let dev = radii.iter().map(|r| (r - radius).abs()).fold(0.0, f64::max);
        (center, radius, dev)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("s");
        for i in 1..=self.dimension() {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for (s, p) in self.params.iter().zip(&self.points) {
            out.push_str(&format_float(*s));
            for x in p {
                out.push(',');
                out.push_str(&format_float(*x));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `x -> rotation * x + translation`.
#[derive(Debug, Clone)]
pub struct Isometry {
    pub rotation: DMatrix<f64>,
    pub translation: DVector<f64>,
    pub residual: f64,
    /// Dimension of the span used to build the map.
    pub rank: usize,
}

impl Isometry {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.rotation * DVector::from_column_slice(x) + &self.translation;
        v.iter().copied().collect()
    }
}

pub const SCREW_MATCH_TOL: f64 = 1e-8;

/// Finds an isometry of `R^N` carrying `c1` onto `c2`.
///
/// Both curves are translated to start at the origin; sample points of `c1`
/// forming a basis of its span are picked greedily, and the same parameters
/// are used for `c2`. Orthonormalizing both with the coefficients of the
/// Cholesky factor of the `c1` Gram matrix maps one frame to the other; the
/// complements are matched arbitrarily and the result projected to the
/// nearest orthogonal matrix.
pub fn congruence_recover(c1: &ScrewCurve, c2: &ScrewCurve) -> Result<Isometry> {
    congruence_recover_with(c1, c2, SCREW_MATCH_TOL)
}

pub fn congruence_recover_with(c1: &ScrewCurve, c2: &ScrewCurve, tol: f64) -> Result<Isometry> {
    if c1.len() != c2.len() {
        return Err(Error::DimensionMismatch { expected: c1.len(), got: c2.len() });
    }
    if c1.dimension() != c2.dimension() {
        return Err(Error::DimensionMismatch { expected: c1.dimension(), got: c2.dimension() });
    }
    if c1.params.iter().zip(&c2.params).any(|(a, b)| (a - b).abs() > 1e-12 * (1.0 + a.abs())) {
        return Err(Error::InvalidArgument("curves are sampled at different parameters".into()));
    }
    let s1 = c1.screw_function();
    let s2 = c2.screw_function();
    let scale = s1.iter().chain(&s2).fold(1.0f64, |m, v| m.max(v.abs()));
    let mismatch = s1.iter().zip(&s2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if mismatch > tol * scale {
        return Err(Error::ScrewMismatch { deviation: mismatch });
    }

    let dim = c1.dimension();
    let shift = |c: &ScrewCurve| -> Vec<DVector<f64>> {
        let o = DVector::from_column_slice(&c.points[0]);
        c.points.iter().map(|p| DVector::from_column_slice(p) - &o).collect()
    };
    let u = shift(c1);
    let v = shift(c2);

    // greedy pivoted Gram-Schmidt on c1 to choose the basis parameters
    let size = u.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut chosen: Vec<usize> = Vec::new();
    let mut frame: Vec<DVector<f64>> = Vec::new();
    while chosen.len() < dim {
        let mut best = (0.0, usize::MAX);
        for (i, x) in u.iter().enumerate() {
            let mut r = x.clone();
            for e in &frame {
                r -= e * e.dot(&r);
            }
            let nr = r.norm();
            if nr > best.0 {
                best = (nr, i);
            }
        }
        if best.1 == usize::MAX || best.0 <= 1e-7 * size.max(f64::MIN_POSITIVE) {
            break;
        }
        let mut r = u[best.1].clone();
        for e in &frame {
            r -= e * e.dot(&r);
        }
        frame.push(r / best.0);
        chosen.push(best.1);
    }
    let rank = chosen.len();

    let mut rotation = DMatrix::<f64>::identity(dim, dim);
    if rank > 0 {
        let ub = DMatrix::from_columns(&chosen.iter().map(|&i| u[i].clone()).collect::<Vec<_>>());
        let vb = DMatrix::from_columns(&chosen.iter().map(|&i| v[i].clone()).collect::<Vec<_>>());
        let gram = ub.transpose() * &ub;
        let chol = gram.cholesky().ok_or(Error::Singular { r: 0.0 })?;
        let l_t = chol.l().transpose();
        let l_t_inv = l_t.try_inverse().ok_or(Error::Singular { r: 0.0 })?;
        let e1 = &ub * &l_t_inv;
        let e2 = &vb * &l_t_inv;
        let q1 = complement(&e1);
        let q2 = complement(&e2);
        let mut a = &e2 * e1.transpose();
        if q1.ncols() > 0 {
            a += &q2 * q1.transpose();
        }
        let svd = a.svd(true, true);
        rotation = svd.u.unwrap() * svd.v_t.unwrap();
    }
    let o1 = DVector::from_column_slice(&c1.points[0]);
    let o2 = DVector::from_column_slice(&c2.points[0]);
    let translation = &o2 - &rotation * &o1;
    let mut iso = Isometry { rotation, translation, residual: 0.0, rank };
    iso.residual = c1
        .points
        .iter()
        .zip(&c2.points)
        .map(|(p, q)| dist2(&iso.apply(p), q).sqrt())
        .fold(0.0, f64::max);
    Ok(iso)
}

/// Orthonormal basis of the orthogonal complement of the (orthonormal) columns of `e`,
/// by pivoted Gram-Schmidt of the standard basis.
fn complement(e: &DMatrix<f64>) -> DMatrix<f64> {
    let n = e.nrows();
    let mut frame: Vec<DVector<f64>> = e.column_iter().map(|c| c.into_owned()).collect();
    let mut out = Vec::new();
    while frame.len() < n {
        let mut best = (0.0, DVector::zeros(n));
        for i in 0..n {
            let mut r = DVector::<f64>::zeros(n);
            r[i] = 1.0;
            // two passes keep the result orthogonal to working precision
            for _ in 0..2 {
                for f in &frame {
                    r -= f * f.dot(&r);
                }
            }
            let nr = r.norm();
            if nr > best.0 {
                best = (nr, r);
            }
        }
        let v = best.1 / best.0;
        frame.push(v.clone());
        out.push(v);
    }
    if out.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&out)
    }
}

/// Tensor-product rule on the unit sphere: Gauss-Legendre in `z`, trapezoid in azimuth.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub points: Vec<Vector3<f64>>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(polar: usize, azimuth: usize) -> Result<Self> {
        if polar < 16 || azimuth < 16 {
            return Err(Error::InsufficientResolution(format!(
                "sphere quadrature needs at least 16 nodes per direction, got {polar} x {azimuth}"
            )));
        }
        let gl = GaussLegendre::new(polar);
        let mut points = Vec::with_capacity(polar * azimuth);
        let mut weights = Vec::with_capacity(polar * azimuth);
        let dphi = 2.0 * PI / azimuth as f64;
        for (&z, &w) in gl.nodes.iter().zip(&gl.weights) {
            let rho = (1.0 - z * z).max(0.0).sqrt();
            for j in 0..azimuth {
                let phi = dphi * j as f64;
                points.push(Vector3::new(rho * phi.cos(), rho * phi.sin(), z));
                weights.push(w * dphi);
            }
        }
        Ok(SphereQuadrature { points, weights })
    }

    pub fn integrate<F: FnMut(&Vector3<f64>) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// Unit tangent frame `(e1, e2)` at `p`.
fn tangent_frame(p: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let seed = if p.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = (seed - p * p.dot(&seed)).normalize();
    let e2 = p.cross(&e1);
    (e1, e2)
}

/// `exp_p(t v)` for a unit tangent `v`.
fn exp_map(p: &Vector3<f64>, v: &Vector3<f64>, t: f64) -> Vector3<f64> {
    p * t.cos() + v * t.sin()
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let rho = (1.0 - z * z).sqrt();
    Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
}

fn random_tangent(rng: &mut ChaCha8Rng, p: &Vector3<f64>) -> Vector3<f64> {
    let (e1, e2) = tangent_frame(p);
    let theta: f64 = rng.random_range(0.0..2.0 * PI);
    e1 * theta.cos() + e2 * theta.sin()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct S2Options {
    /// Gauss-Legendre nodes in `cos theta`; the azimuth uses twice as many.
    pub resolution: usize,
    pub metric_samples: usize,
    pub geodesics: usize,
    pub geodesic_samples: usize,
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for S2Options {
    fn default() -> Self {
        S2Options { resolution: 64, metric_samples: 100, geodesics: 4, geodesic_samples: 512, fd_step: 1e-4, seed: 0 }
    }
}

pub const S2_RADIUS_TOL: f64 = 1e-8;
pub const S2_DISTORTION_TOL: f64 = 1e-6;
pub const S2_CIRCLE_TOL: f64 = 1e-8;
pub const S2_SCREW_TOL: f64 = 1e-8;
pub const S2_CONGRUENCE_TOL: f64 = 1e-8;
pub const S2_PARSEVAL_TOL: f64 = 1e-10;

/// The map `p -> c_Phi Phi(d(p, .))` on `S^2` in coordinates of an
/// orthonormal basis of the first eigenspace.
#[derive(Debug, Clone)]
pub struct S2Embedding {
    pub quadrature: SphereQuadrature,
    pub constants: EmbeddingConstants,
    pub phi: CosPolynomial<f64>,
    basis_scale: f64,
}

impl S2Embedding {
    pub fn new(resolution: usize) -> Result<Self> {
        let quadrature = SphereQuadrature::new(resolution, 2 * resolution)?;
        let exponents = ExponentPair::from_integers(1, 0)?;
        let eig = Eigenfunction::new(&exponents, 1)?;
        let constants = embedding_constants(&exponents, &eig)?;
        Ok(S2Embedding { quadrature, constants, phi: eig.poly, basis_scale: (3.0 / (4.0 * PI)).sqrt() })
    }

    /// `x_i(p) = <phi_i, R^Phi(p)>` with `phi_i(q) = sqrt(3 / 4 pi) q_i`.
    pub fn embed(&self, p: &Vector3<f64>) -> Vector3<f64> {
        let c = self.constants.c_g;
        let mut x = Vector3::zeros();
        for (q, w) in self.quadrature.points.iter().zip(&self.quadrature.weights) {
            // Phi(d(p, q)) = P(cos d) = P(<p, q>)
            let radial = c * self.phi.eval(p.dot(q));
            x += q * (w * self.basis_scale * radial);
        }
        x
    }

    /// Image of the great circle through `p` with unit tangent `v`, sampled over one period.
    pub fn geodesic_image(&self, p: &Vector3<f64>, v: &Vector3<f64>, samples: usize) -> Result<ScrewCurve> {
        ScrewCurve::sample(|s| self.embed(&exp_map(p, v, s)).iter().copied().collect(), 2.0 * PI, samples)
    }

    /// `||R_p Phi||^2` by quadrature.
    pub fn radial_norm_squared(&self, p: &Vector3<f64>) -> f64 {
        self.quadrature.integrate(|q| self.phi.eval(p.dot(q)).powi(2))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct S2EmbeddingReport {
    pub options: S2Options,
    pub image_radius: f64,
    pub checks: Vec<CheckResult>,
    #[serde(skip)]
    pub geodesics: Vec<ScrewCurve>,
}

impl S2EmbeddingReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn s2_explicit_embedding(resolution: usize) -> Result<S2EmbeddingReport> {
    s2_explicit_embedding_with(S2Options { resolution, ..S2Options::default() })
}

pub fn s2_explicit_embedding_with(opts: S2Options) -> Result<S2EmbeddingReport> {
    if opts.geodesics < 2 || opts.geodesic_samples < 8 || opts.metric_samples == 0 {
        return Err(Error::InvalidArgument("need at least two geodesics, eight samples each, and one metric sample".into()));
    }
    let emb = S2Embedding::new(opts.resolution)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let big_c = emb.constants.big_c_g;
    let mut checks = Vec::new();

    checks.push(CheckResult::new("s2.image_constant_c", (big_c - 1.0).abs(), S2_RADIUS_TOL));

    // radius and metric at random points along random directions
    let h = opts.fd_step;
    let mut radius_dev = 0.0f64;
    let mut distortion = 0.0f64;
    let mut radius_sum = 0.0;
    for _ in 0..opts.metric_samples {
        let p = random_unit(&mut rng);
        let v = random_tangent(&mut rng, &p);
        let x = emb.embed(&p);
        radius_sum += x.norm();
        radius_dev = radius_dev.max((x.norm() - big_c).abs());
        let at = |t: f64| emb.embed(&exp_map(&p, &v, t));
        let dx = (at(-2.0 * h) - at(-h) * 8.0 + at(h) * 8.0 - at(2.0 * h)) / (12.0 * h);
        distortion = distortion.max((dx.norm_squared() - 1.0).abs());
    }
    let image_radius = radius_sum / opts.metric_samples as f64;
    checks.push(CheckResult::new("s2.image_radius", radius_dev, S2_RADIUS_TOL));
    checks.push(CheckResult::new("s2.metric_distortion", distortion, S2_DISTORTION_TOL));

    // geodesic images: circles of radius 1, stationary screw function, congruent
    let exponents = ExponentPair::from_integers(1, 0)?;
    let screw = ScrewFormula::new(&exponents, 1)?;
    let mut geodesics = Vec::with_capacity(opts.geodesics);
    let (mut circle_dev, mut screw_dev, mut planar_dev) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..opts.geodesics {
        let p = random_unit(&mut rng);
        let v = random_tangent(&mut rng, &p);
        let curve = emb.geodesic_image(&p, &v, opts.geodesic_samples)?;
        let (_, radius, dev) = curve.circle_fit();
        circle_dev = circle_dev.max((radius - 1.0).abs());
        planar_dev = planar_dev.max(dev);
        screw_dev = screw_dev.max(curve.deviation_from(|s| screw.eval(s)));
        geodesics.push(curve);
    }
    checks.push(CheckResult::new("s2.geodesic_circle_radius", circle_dev, S2_CIRCLE_TOL));
    checks.push(CheckResult::new("s2.geodesic_roundness", planar_dev, S2_CIRCLE_TOL));
    checks.push(CheckResult::new("s2.screw_stationarity", screw_dev, S2_SCREW_TOL));

    let mut congruence = 0.0f64;
    for pair in geodesics.windows(2) {
        congruence = match congruence_recover(&pair[0], &pair[1]) {
            Ok(iso) => congruence.max(iso.residual),
            Err(_) => f64::INFINITY,
        };
    }
    checks.push(CheckResult::new("s2.congruence_residual", congruence, S2_CONGRUENCE_TOL));

    // vol(S^2) = 3 ||R_p Phi||^2
    let vol = emb.quadrature.integrate(|_| 1.0);
    let p = random_unit(&mut rng);
    let parseval = (vol - 3.0 * emb.radial_norm_squared(&p)).abs() / vol;
    checks.push(CheckResult::new("s2.parseval_volume", parseval, S2_PARSEVAL_TOL));

    Ok(S2EmbeddingReport { options: opts, image_radius, checks, geodesics })
}

/// `f(q) = sum_j coeff_j P_{l_j}(<axis_j, q>)`, a finite sum of zonal spherical
/// harmonics, each an eigenfunction of the positive Laplacian with eigenvalue `l (l + 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct ZonalSum {
    pub terms: Vec<(f64, usize, [f64; 3])>,
}

impl ZonalSum {
    pub fn new() -> Self {
        ZonalSum { terms: Vec::new() }
    }

    pub fn term(mut self, coeff: f64, degree: usize, axis: [f64; 3]) -> Self {
        let a = Vector3::from(axis).normalize();
        self.terms.push((coeff, degree, [a.x, a.y, a.z]));
        self
    }

    pub fn eval(&self, q: &Vector3<f64>) -> f64 {
        self.terms.iter().map(|&(c, l, a)| c * legendre(l, Vector3::from(a).dot(q))).sum()
    }

    pub fn laplacian(&self, q: &Vector3<f64>) -> f64 {
        self.terms
            .iter()
            .map(|&(c, l, a)| c * (l * (l + 1)) as f64 * legendre(l, Vector3::from(a).dot(q)))
            .sum()
    }
}

impl Default for ZonalSum {
    fn default() -> Self {
        Self::new()
    }
}

/// Mean of `f` over the geodesic circle of radius `r` about `p`.
pub fn spherical_mean<F: Fn(&Vector3<f64>) -> f64>(f: F, p: &Vector3<f64>, r: f64, azimuth: usize) -> f64 {
    let (e1, e2) = tangent_frame(p);
    let mut acc = 0.0;
    for j in 0..azimuth {
        let th = 2.0 * PI * j as f64 / azimuth as f64;
        acc += f(&exp_map(p, &(e1 * th.cos() + e2 * th.sin()), r));
    }
    acc / azimuth as f64
}

pub const COMMUTATIVITY_TOL: f64 = 1e-6;

/// `max_r |A_p(Delta f)(r) + (A_p f)'' + cot r (A_p f)'|` over 64 radii in `[0.1, pi - 0.1]`,
/// with `Delta` the positive Laplacian and derivatives by five-point differences.
pub fn basic_commutativity_check(f: &ZonalSum, p: [f64; 3], azimuth: usize) -> Result<f64> {
    if azimuth < 16 {
        return Err(Error::InsufficientResolution(format!("azimuthal resolution {azimuth} is below 16")));
    }
    let p = Vector3::from(p).normalize();
    let mean = |r: f64| spherical_mean(|q| f.eval(q), &p, r, azimuth);
    let h = 1e-3;
    let mut worst = 0.0f64;
    for i in 0..64 {
        let r = 0.1 + (PI - 0.2) * i as f64 / 63.0;
        let (m2, m1, m0, p1, p2) = (mean(r - 2.0 * h), mean(r - h), mean(r), mean(r + h), mean(r + 2.0 * h));
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d2 = (-m2 + 16.0 * m1 - 30.0 * m0 + 16.0 * p1 - p2) / (12.0 * h * h);
        let lhs = spherical_mean(|q| f.laplacian(q), &p, r, azimuth);
        let rhs = -d2 - r.cos() / r.sin() * d1;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialityCheck {
    pub distance: f64,
    pub mean: f64,
    /// `max - min` of `<R_p F, R_q G>` over the sampled pairs.
    pub spread: f64,
    /// `|<R_p F, R_q F> - vol(S^1) ||F||_d^2 F(d)|` when `F == G`; the formula holds for eigenfunctions.
    pub formula_defect: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialityOptions {
    pub resolution: usize,
    pub pairs: usize,
    pub seed: u64,
}

impl Default for RadialityOptions {
    fn default() -> Self {
        RadialityOptions { resolution: 64, pairs: 8, seed: 0 }
    }
}

pub const RADIALITY_TOL: f64 = 1e-6;

pub fn l2_radiality_check(f: &CosPolynomial<f64>, g: &CosPolynomial<f64>, distance: f64) -> Result<RadialityCheck> {
    l2_radiality_check_with(f, g, distance, RadialityOptions::default())
}

pub fn l2_radiality_check_with(
    f: &CosPolynomial<f64>,
    g: &CosPolynomial<f64>,
    distance: f64,
    opts: RadialityOptions,
) -> Result<RadialityCheck> {
    if opts.pairs < 2 {
        return Err(Error::InvalidArgument("need at least two point pairs".into()));
    }
    let quad = SphereQuadrature::new(opts.resolution, 2 * opts.resolution)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut values = Vec::with_capacity(opts.pairs);
    for _ in 0..opts.pairs {
        let p = random_unit(&mut rng);
        let v = random_tangent(&mut rng, &p);
        let q = exp_map(&p, &v, distance);
        // F, G are polynomials in cos d = <p, x>
        values.push(quad.integrate(|x| f.eval(p.dot(x)) * g.eval(q.dot(x))));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let formula_defect = (f == g).then(|| {
        let norm = WeightedNorm::new(ExponentPair::from_integers(1, 0).expect("valid pair"));
        let predicted = 2.0 * PI * norm.norm_squared(|r| f.value_at_radius(r)) * f.value_at_radius(distance);
        values.iter().map(|v| (v - predicted).abs()).fold(0.0, f64::max)
    });
    Ok(RadialityCheck { distance, mean, spread: max - min, formula_defect })
}
