//! Cosine-polynomial algebra and root analysis.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_spaces::ExponentPair;
use crate::poly::CosPolynomial;
use crate::profile::RadialProfile;

/// Integer polynomial `T_m` with `T_m(cos x) = cos(m x)`.
///
/// Built from `cos((m+1)x) = 2 cos(mx) cos x - cos((m-1)x)`. Even `m` carry a
/// constant term, so the coefficient index starts at zero.
pub fn cos_multiple_angle(m: u32) -> Result<CosPolynomial<BigInt>> {
    if m == 0 {
        return Err(Error::InvalidArgument("multiple-angle index must be at least 1".into()));
    }
    let two_x = CosPolynomial::new(vec![BigInt::from(0), BigInt::from(2)]);
    let mut prev = CosPolynomial::constant(BigInt::from(1));
    let mut cur = CosPolynomial::<BigInt>::x();
    for _ in 1..m {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Roots of a real polynomial, grouped by multiplicity.
#[derive(Debug, Clone, Serialize)]
pub struct RootSet {
    /// Every root, repeated by multiplicity.
    pub all: Vec<Complex64>,
    /// Distinct roots with their multiplicities.
    pub distinct: Vec<(Complex64, usize)>,
    /// `max |p(z)|` over the returned roots.
    pub residual: f64,
    /// Coefficient misfit of `lead * prod (x - z)` relative to the largest coefficient.
    pub reconstruction_error: f64,
    /// Set when either residual measure exceeds `1e-6`.
    pub ill_conditioned: bool,
}

impl RootSet {
    /// Real parts of the roots, sorted ascending, or an error if any root has
    /// imaginary part above `tol`.
    pub fn real_sorted(&self, tol: f64) -> Result<Vec<f64>> {
        if let Some(z) = self.all.iter().find(|z| z.im.abs() > tol) {
            return Err(Error::NonRealRoot { re: z.re, im: z.im });
        }
        let mut v: Vec<f64> = self.all.iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        Ok(v)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "roots": self.distinct.iter().map(|(z, m)| serde_json::json!({"re": z.re, "im": z.im, "multiplicity": m})).collect::<Vec<_>>(),
            "residual": self.residual,
            "reconstruction_error": self.reconstruction_error,
            "ill_conditioned": self.ill_conditioned,
        })
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    let mut best = horner(coeffs, z).0.norm();
    for _ in 0..60 {
        let (p, dp) = horner(coeffs, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let val = horner(coeffs, next).0.norm();
        if !(val < best) {
            break;
        }
        let step = (next - z).norm();
        z = next;
        best = val;
        if step <= 1e-16 * z.norm().max(1e-300) {
            break;
        }
    }
    z
}

/// All complex roots from the eigenvalues of the companion matrix, each
/// polished by Newton's method.
pub fn roots(p: &CosPolynomial<f64>) -> Result<RootSet> {
    let d = p.degree();
    if d < 1 {
        return Err(Error::DegreeTooLow { degree: d, required: 1 });
    }
    let c = p.coeffs();
    let lead = c[d];
    let mut companion = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        companion[(i, d - 1)] = -c[i] / lead;
    }
    let eig = companion.complex_eigenvalues();

    let mut all: Vec<Complex64> = eig
        .iter()
        .map(|&z| {
            let z = polish(c, z);
            // snap numerically real roots onto the axis when that is no worse
            if z.im.abs() <= 1e-10 * (1.0 + z.norm()) {
                let zr = polish(c, Complex64::new(z.re, 0.0));
                if zr.im == 0.0 && horner(c, zr).0.norm() <= horner(c, z).0.norm() * 1.0 + 1e-300 {
                    return zr;
                }
            }
            z
        })
        .collect();
    all.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut distinct: Vec<(Complex64, usize)> = Vec::new();
    for &z in &all {
        match distinct.iter_mut().find(|(w, _)| (w - z).norm() <= 1e-7 * (1.0 + z.norm())) {
            Some(entry) => entry.1 += 1,
            None => distinct.push((z, 1)),
        }
    }

    let residual = all.iter().map(|&z| horner(c, z).0.norm()).fold(0.0, f64::max);
    let mut prod = vec![Complex64::new(lead, 0.0)];
    for &z in &all {
        let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
        for (i, &a) in prod.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * z;
        }
        prod = next;
    }
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let reconstruction_error = prod
        .iter()
        .zip(c)
        .map(|(a, &b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale;
    let ill_conditioned = residual / scale > 1e-6 || reconstruction_error > 1e-6;
    Ok(RootSet { all, distinct, residual, reconstruction_error, ill_conditioned })
}

/// Convex hull of points in the plane, counter-clockwise, collinear points dropped.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| (*a - *b).norm() == 0.0);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(q: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let t = (((q - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (q - (a + ab * t)).norm()
}

/// Euclidean distance from `q` to the convex polygon `hull` (zero inside).
pub fn distance_to_hull(hull: &[Complex64], q: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (q - hull[0]).norm(),
        2 => segment_distance(q, hull[0], hull[1]),
        n => {
            let inside = (0..n).all(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                (b - a).re * (q - a).im - (b - a).im * (q - a).re >= 0.0
            });
            if inside {
                0.0
            } else {
                (0..n).map(|i| segment_distance(q, hull[i], hull[(i + 1) % n])).fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// True iff every point of `inner` lies within `tol` of the convex hull of `outer`.
pub fn roots_within_hull(outer: &[Complex64], inner: &[Complex64], tol: f64) -> bool {
    let hull = convex_hull(outer);
    inner.iter().all(|&q| distance_to_hull(&hull, q) <= tol)
}

/// Gauss-Lucas: the roots of `p'` lie in the convex hull of the roots of `p`.
pub fn gauss_lucas_check(p: &CosPolynomial<f64>, tol: f64) -> Result<bool> {
    if p.degree() < 2 {
        return Err(Error::DegreeTooLow { degree: p.degree(), required: 2 });
    }
    let outer = roots(p)?;
    let inner = roots(&p.derivative())?;
    Ok(roots_within_hull(&outer.all, &inner.all, tol))
}

/// Strict alternation `-1 < r_1 < s_1 < r_2 < ... < s_{d-1} < r_d < 1` of the
/// roots `r_i` of `p` and `s_i` of `p'`, with every gap larger than `tol`.
pub fn interlacing_check(p: &CosPolynomial<f64>, tol: f64) -> Result<bool> {
    if p.degree() < 1 {
        return Err(Error::DegreeTooLow { degree: p.degree(), required: 1 });
    }
    let pr = roots(p)?.real_sorted(tol)?;
    if let Some(w) = pr.windows(2).find(|w| w[1] - w[0] <= tol) {
        return Err(Error::RepeatedRoot(w[0]));
    }
    let dr = if p.degree() >= 2 { roots(&p.derivative())?.real_sorted(tol)? } else { Vec::new() };
    let mut merged = Vec::with_capacity(pr.len() + dr.len() + 2);
    merged.push(-1.0);
    for i in 0..pr.len() {
        merged.push(pr[i]);
        if i < dr.len() {
            merged.push(dr[i]);
        }
    }
    merged.push(1.0);
    Ok(merged.windows(2).all(|w| w[1] - w[0] > tol))
}

/// Result of fitting `O = C (1 - x)^sigma (1 + x)^tau` to the squared density.
#[derive(Debug, Clone, Serialize)]
pub struct DensityFit {
    pub c: f64,
    pub sigma: i64,
    pub tau: i64,
    pub alpha: f64,
    pub beta: f64,
    /// Largest relative misfit after rounding the exponents.
    pub residual: f64,
}

impl DensityFit {
    /// Exact `(alpha, beta) = (tau, (sigma - tau) / 2)`.
    pub fn exponents(&self) -> Result<ExponentPair> {
        ExponentPair::new(Rational64::from_integer(self.tau), Rational64::new(self.sigma - self.tau, 2))
    }
}

const FIT_MARGIN: f64 = 0.15;
const FIT_TOLERANCE: f64 = 1e-4;

/// Recovers the density form `C (1 - cos)^beta sin^alpha` from samples of
/// `r^(n-1) omega` on `(0, pi)` by a log-linear least-squares fit.
pub fn fit_density_form(profile: &RadialProfile) -> Result<DensityFit> {
    let samples: Vec<(f64, f64)> = profile
        .iter()
        .filter(|&(r, _)| (FIT_MARGIN..=PI - FIT_MARGIN).contains(&r))
        .collect();
    if let Some(&(r, value)) = samples.iter().find(|&&(_, v)| !(v > 0.0)) {
        return Err(Error::NonPositiveSample { r, value });
    }
    if samples.len() < 3 {
        return Err(Error::InsufficientResolution(format!(
            "need at least 3 samples in [{FIT_MARGIN}, pi - {FIT_MARGIN}], found {}",
            samples.len()
        )));
    }
    let m = samples.len();
    let mut a = DMatrix::<f64>::zeros(m, 3);
    let mut b = DVector::<f64>::zeros(m);
    for (i, &(r, v)) in samples.iter().enumerate() {
        let x = r.cos();
        a[(i, 0)] = 1.0;
        a[(i, 1)] = (1.0 - x).ln();
        a[(i, 2)] = (1.0 + x).ln();
        b[i] = 2.0 * v.ln();
    }
    let sol = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidProfile(e.to_string()))?;
    let sigma = sol[1].round() as i64;
    let tau = sol[2].round() as i64;

    let log_c = (0..m)
        .map(|i| b[i] - sigma as f64 * a[(i, 1)] - tau as f64 * a[(i, 2)])
        .sum::<f64>()
        / m as f64;
    let c = log_c.exp();
    let residual = samples
        .iter()
        .map(|&(r, v)| {
            let x = r.cos();
            let model = c * (1.0 - x).powi(sigma as i32) * (1.0 + x).powi(tau as i32);
            (model / (v * v) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    if !(residual <= FIT_TOLERANCE) {
        return Err(Error::PoorFit { residual });
    }
    Ok(DensityFit {
        c,
        sigma,
        tau,
        alpha: tau as f64,
        beta: (sigma - tau) as f64 / 2.0,
        residual,
    })
}
