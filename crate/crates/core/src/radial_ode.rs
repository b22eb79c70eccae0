//! The radial eigenfunction equation `y'' + H y' + lambda y = 0` on `[0, pi]`,
//! with `H(r) = ((alpha + beta) cos r + beta) / sin r`.
//!
//! Both endpoints are regular singular points. The numeric solver launches a
//! power series at each end and matches the two branches at `pi / 2`; the
//! exact solver runs the coefficient recursion for `Phi = P(cos r)` at the
//! eigenvalues `lambda_k = k (k + alpha + beta)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_spaces::ExponentPair;
use crate::ode::{self, Tolerance};
use crate::poly::{CosPolynomial, ExactCosPolynomial};
use crate::profile::{uniform_grid, RadialProfile};

/// Number of power-series coefficients kept at each endpoint (through `r^10`).
pub const SERIES_TERMS: usize = 11;

/// Relative mismatch of the two branches below which `lambda` is treated as an
/// eigenvalue and the far branch is taken from the regular endpoint series.
pub const EIGEN_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialOdeProblem {
    pub exponents: ExponentPair,
    pub lambda: f64,
}

impl RadialOdeProblem {
    pub fn new(exponents: ExponentPair, lambda: f64) -> Result<Self> {
        if exponents.alpha() + exponents.beta() <= Rational64::zero() {
            return Err(Error::InvalidExponents("alpha + beta must be positive".into()));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be nonnegative, got {lambda}")));
        }
        Ok(RadialOdeProblem { exponents, lambda })
    }

    /// Problem at the `k`-th eigenvalue.
    pub fn at_eigenvalue(exponents: ExponentPair, k: u32) -> Result<Self> {
        let lambda = exponents.spectrum(k).to_f64().unwrap_or(f64::NAN);
        Self::new(exponents, lambda)
    }

    pub fn mean_curvature(&self, r: f64) -> f64 {
        self.exponents.mean_curvature(r)
    }
}

/// Power series `sum c_j t^j` of the solution of
/// `y'' + (p cos t + q) / sin t * y' + lambda y = 0` with `y(0) = 1`, `y'(0) = 0`.
///
/// Obtained by multiplying through by `sin t` and matching powers of `t`:
/// the coefficient of `c_{N+1}` at order `N` is `(N + 1)(N + p + q)`.
pub fn frobenius_series(p: f64, q: f64, lambda: f64, terms: usize) -> Vec<f64> {
    let sin_c = |i: usize| -> f64 {
        if i.is_multiple_of(2) {
            0.0
        } else {
            let sign = if (i / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign / factorial(i)
        }
    };
    let cos_c = |i: usize| -> f64 {
        if i % 2 == 1 {
            0.0
        } else {
            let sign = if (i / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign / factorial(i)
        }
    };
    let mut c = vec![0.0; terms.max(1)];
    c[0] = 1.0;
    for big_n in 0..terms.saturating_sub(1) {
        let target = big_n + 1;
        let mut rest = 0.0;
        // sin * y''
        for i in 2..=big_n {
            let j = big_n + 2 - i;
            if j < terms {
                rest += sin_c(i) * (j * (j - 1)) as f64 * c[j];
            }
        }
        // (p cos + q) * y'
        for i in 1..=big_n {
            let j = big_n + 1 - i;
            rest += p * cos_c(i) * j as f64 * c[j];
        }
        // lambda sin * y
        for i in 1..=big_n {
            rest += lambda * sin_c(i) * c[big_n - i];
        }
        let denom = (target as f64) * (big_n as f64 + p + q);
        c[target] = if denom == 0.0 { 0.0 } else { -rest / denom };
    }
    c
}

fn factorial(i: usize) -> f64 {
    (1..=i).map(|k| k as f64).product()
}

fn series_eval(c: &[f64], t: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for (j, &cj) in c.iter().enumerate().rev() {
        v = v * t + cj;
        if j > 0 {
            d = d * t + j as f64 * cj;
        }
    }
    (v, d)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiOptions {
    pub launch_radius: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for PhiOptions {
    fn default() -> Self {
        PhiOptions { launch_radius: 1e-3, rtol: 1e-13, atol: 1e-15 }
    }
}

/// Numerical radial eigenfunction `Phi_lambda` on a uniform grid over `[0, pi]`.
#[derive(Debug, Clone, Serialize)]
pub struct PhiSolution {
    pub lambda: f64,
    pub exponents: ExponentPair,
    pub phi: RadialProfile,
    pub dphi: RadialProfile,
    /// Series coefficients at `r = 0`, ascending powers.
    pub origin_series: Vec<f64>,
    /// Series coefficients of the regular solution at `r = pi`, in `s = pi - r`.
    pub far_series: Vec<f64>,
    pub launch_radius: f64,
    /// Sine of the angle between `(y, y')` of the two branches at `pi / 2`.
    pub matching_defect: f64,
    /// Whether the branch from the origin continues into the regular solution at `pi`.
    pub regular_at_far_end: bool,
}

impl PhiSolution {
    /// `Phi'(pi)` for regular solutions; otherwise the slope at `pi - launch_radius`,
    /// where the singular branch has already taken over.
    pub fn endpoint_slope(&self) -> f64 {
        if self.regular_at_far_end {
            *self.dphi.values.last().unwrap()
        } else {
            self.dphi
                .values
                .iter()
                .rev()
                .copied()
                .find(|v| v.is_finite())
                .unwrap_or(f64::NAN)
        }
    }

    /// Cubic Hermite interpolation of `(Phi, Phi')` at `r`.
    pub fn interpolate(&self, r: f64) -> (f64, f64) {
        let g = &self.phi.grid;
        let n = g.len();
        let r = r.clamp(g[0], g[n - 1]);
        let i = g.partition_point(|&x| x <= r).clamp(1, n - 1) - 1;
        let h = g[i + 1] - g[i];
        let t = (r - g[i]) / h;
        let (y0, y1) = (self.phi.values[i], self.phi.values[i + 1]);
        let (d0, d1) = (self.dphi.values[i] * h, self.dphi.values[i + 1] * h);
        let (t2, t3) = (t * t, t * t * t);
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1;
        let dv = ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * d0 + (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * d1) / h;
        (v, dv)
    }

    /// `max |Phi(r_i) - P(cos r_i)|` over grid points where `Phi` is finite.
    pub fn max_difference(&self, poly: &CosPolynomial<f64>) -> f64 {
        self.phi
            .iter()
            .filter(|(_, v)| v.is_finite())
            .map(|(r, v)| (v - poly.value_at_radius(r)).abs())
            .fold(0.0, f64::max)
    }
}

pub fn solve_phi(problem: &RadialOdeProblem, grid_size: usize) -> Result<PhiSolution> {
    solve_phi_with(problem, grid_size, PhiOptions::default())
}

pub fn solve_phi_with(problem: &RadialOdeProblem, grid_size: usize, opts: PhiOptions) -> Result<PhiSolution> {
    if grid_size < 16 {
        return Err(Error::InvalidArgument(format!("grid_size must be at least 16, got {grid_size}")));
    }
    let eps = opts.launch_radius;
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::InvalidArgument(format!("launch radius must lie in (0, 0.1), got {eps}")));
    }
    let tol = Tolerance { rtol: opts.rtol, atol: opts.atol };
    let (alpha, beta) = (problem.exponents.alpha_f64(), problem.exponents.beta_f64());
    let lambda = problem.lambda;
    let grid = uniform_grid(0.0, PI, grid_size);
    let mid = FRAC_PI_2;

    let origin_series = frobenius_series(alpha + beta, beta, lambda, SERIES_TERMS);
    // in s = pi - r the coefficient becomes ((alpha + beta) cos s - beta) / sin s
    let far_series = frobenius_series(alpha + beta, -beta, lambda, SERIES_TERMS);

    let rhs = |p: f64, q: f64| {
        move |t: f64, y: &[f64], dy: &mut [f64]| {
            let (s, c) = t.sin_cos();
            dy[0] = y[1];
            dy[1] = -(p * c + q) / s * y[1] - lambda * y[0];
        }
    };

    let mut phi = vec![f64::NAN; grid_size];
    let mut dphi = vec![f64::NAN; grid_size];

    // branch from the origin, up to the matching point
    let near: Vec<usize> = (0..grid_size).filter(|&i| grid[i] <= eps).collect();
    for &i in &near {
        let (v, d) = series_eval(&origin_series, grid[i]);
        phi[i] = v;
        dphi[i] = d;
    }
    let left_idx: Vec<usize> = (0..grid_size).filter(|&i| grid[i] > eps && grid[i] < mid).collect();
    let mut left_out: Vec<f64> = left_idx.iter().map(|&i| grid[i]).collect();
    left_out.push(mid);
    let (y0, d0) = series_eval(&origin_series, eps);
    let (left, _) = ode::integrate(rhs(alpha + beta, beta), eps, &[y0, d0], &left_out, tol)?;
    for (k, &i) in left_idx.iter().enumerate() {
        phi[i] = left[k][0];
        dphi[i] = left[k][1];
    }
    let at_mid_left = left.last().unwrap().clone();

    // regular branch from the far end, in s = pi - r
    let right_idx: Vec<usize> = (0..grid_size).filter(|&i| grid[i] >= mid).collect();
    let mut s_out: Vec<f64> = Vec::new();
    let mut s_idx: Vec<usize> = Vec::new();
    for &i in right_idx.iter().rev() {
        let s = PI - grid[i];
        if s > eps && s < PI - mid {
            s_out.push(s);
            s_idx.push(i);
        }
    }
    s_out.push(PI - mid);
    let (ys0, ds0) = series_eval(&far_series, eps);
    let (right, _) = ode::integrate(rhs(alpha + beta, -beta), eps, &[ys0, ds0], &s_out, tol)?;
    // right[..] is ordered by increasing s; last entry is the matching point
    let at_mid_right = {
        let y = right.last().unwrap();
        [y[0], -y[1]]
    };

    let (yl, dl) = (at_mid_left[0], at_mid_left[1]);
    let (yr, dr) = (at_mid_right[0], at_mid_right[1]);
    let norm_l = yl.hypot(dl);
    let norm_r = yr.hypot(dr);
    let matching_defect = (yl * dr - dl * yr).abs() / (norm_l * norm_r);
    let regular = matching_defect <= EIGEN_MATCH_TOL;

    if regular {
        let scale = (yl * yr + dl * dr) / (norm_r * norm_r);
        for (k, &i) in s_idx.iter().enumerate() {
            phi[i] = scale * right[k][0];
            dphi[i] = -scale * right[k][1];
        }
        for &i in &right_idx {
            let s = PI - grid[i];
            if s <= eps {
                let (v, d) = series_eval(&far_series, s);
                phi[i] = scale * v;
                dphi[i] = -scale * d;
            } else if s >= PI - mid {
                phi[i] = scale * yr;
                dphi[i] = scale * dr;
            }
        }
    } else {
        // the singular mode dominates, so forward integration stays accurate
        let fwd_idx: Vec<usize> = right_idx.iter().copied().filter(|&i| PI - grid[i] > eps).collect();
        let fwd_out: Vec<f64> = fwd_idx.iter().map(|&i| grid[i]).collect();
        let mut fwd_out_full = fwd_out.clone();
        fwd_out_full.push(PI - eps);
        let (fwd, _) = ode::integrate(rhs(alpha + beta, beta), mid, &[yl, dl], &fwd_out_full, tol)?;
        for (k, &i) in fwd_idx.iter().enumerate() {
            phi[i] = fwd[k][0];
            dphi[i] = fwd[k][1];
        }
        // grid points within eps of pi keep the slope at pi - eps as a marker
        let edge = fwd.last().unwrap();
        for &i in &right_idx {
            if PI - grid[i] <= eps {
                phi[i] = f64::NAN;
                dphi[i] = if i == grid_size - 1 { f64::NAN } else { edge[1] };
            }
        }
        let last = grid_size - 1;
        dphi[last] = edge[1].signum() * f64::INFINITY;
        phi[last] = edge[0].signum() * f64::INFINITY;
    }

    let label = format!("phi(lambda={lambda})");
    let dlabel = format!("dphi(lambda={lambda})");
    let phi_profile = RadialProfile::new(label, grid.clone(), phi)?;
    let dphi_profile = RadialProfile::new(dlabel, grid, dphi)?;
    Ok(PhiSolution {
        lambda,
        exponents: problem.exponents,
        phi: phi_profile,
        dphi: dphi_profile,
        origin_series,
        far_series,
        launch_radius: eps,
        matching_defect,
        regular_at_far_end: regular,
    })
}

fn to_big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Exact `Phi_{lambda_k} = sum_i a_i cos^i` with `sum_i a_i = 1`.
///
/// Runs the backward recursion
/// `(k^2 - i^2 + (k - i)(alpha + beta)) a_i = beta (i + 1) a_{i+1} - (i + 1)(i + 2) a_{i+2}`
/// from `a_k = 1`, `a_{k+1} = a_{k+2} = 0`, then normalizes.
pub fn phi_polynomial(exponents: &ExponentPair, k: u32) -> Result<ExactCosPolynomial> {
    if k == 0 {
        return Err(Error::InvalidArgument("phi_polynomial needs k >= 1".into()));
    }
    let a_plus_b = to_big(exponents.alpha() + exponents.beta());
    if a_plus_b <= BigRational::zero() {
        return Err(Error::InvalidExponents("alpha + beta must be positive".into()));
    }
    let beta = to_big(exponents.beta());
    let k = k as usize;
    let int = |v: usize| BigRational::from_integer(BigInt::from(v));
    let mut a = vec![BigRational::zero(); k + 3];
    a[k] = BigRational::from_integer(BigInt::from(1));
    for i in (0..k).rev() {
        let denom = int(k * k - i * i) + int(k - i) * &a_plus_b;
        if denom.is_zero() {
            return Err(Error::DegenerateRecursion { index: i });
        }
        let num = &beta * int(i + 1) * &a[i + 1] - int((i + 1) * (i + 2)) * &a[i + 2];
        a[i] = num / denom;
    }
    a.truncate(k + 1);
    let total = a.iter().fold(BigRational::zero(), |acc, c| acc + c);
    if total.is_zero() {
        return Err(Error::DegenerateRecursion { index: 0 });
    }
    Ok(CosPolynomial::new(a.into_iter().map(|c| c / &total).collect()))
}

/// Input accepted by [`phi_residual`].
#[derive(Debug, Clone, Copy)]
pub enum PhiSource<'a> {
    Numeric(&'a PhiSolution),
    Polynomial(&'a CosPolynomial<f64>),
}

/// `max |Phi'' + H Phi' + lambda Phi|` over the interior.
///
/// Polynomials are differentiated analytically on 1001 interior radii; sampled
/// solutions use fourth-order differences of `Phi'` and skip points within
/// `max(3h, 2 launch_radius)` of either endpoint.
pub fn phi_residual(source: PhiSource<'_>, problem: &RadialOdeProblem) -> f64 {
    let lambda = problem.lambda;
    let (a, b) = (problem.exponents.alpha_f64(), problem.exponents.beta_f64());
    match source {
        PhiSource::Polynomial(p) => {
            let d1 = p.derivative();
            let d2 = d1.derivative();
            (1..1000)
                .map(|i| {
                    let r = PI * i as f64 / 1000.0;
                    let (s, c) = r.sin_cos();
                    let res = s * s * d2.eval(c) - c * d1.eval(c) - ((a + b) * c + b) * d1.eval(c)
                        + lambda * p.eval(c);
                    res.abs()
                })
                .fold(0.0, f64::max)
        }
        PhiSource::Numeric(sol) => {
            let g = &sol.phi.grid;
            let y = &sol.phi.values;
            let dy = &sol.dphi.values;
            let n = g.len();
            let h = g[1] - g[0];
            let margin = (3.0 * h).max(2.0 * sol.launch_radius);
            let mut worst = 0.0f64;
            for i in 2..n - 2 {
                let r = g[i];
                if r < margin || PI - r < margin {
                    continue;
                }
                let ddy = (dy[i - 2] - 8.0 * dy[i - 1] + 8.0 * dy[i + 1] - dy[i + 2]) / (12.0 * h);
                let res = ddy + problem.mean_curvature(r) * dy[i] + lambda * y[i];
                if res.is_finite() {
                    worst = worst.max(res.abs());
                }
            }
            worst
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn pair(a: i64, b: i64) -> ExponentPair {
        ExponentPair::from_integers(a, b).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn series_reproduces_cosine() {
        // S^n at lambda = n has Phi = cos
        for n in [2.0, 3.0, 7.0] {
            let c = frobenius_series(n - 1.0, 0.0, n, SERIES_TERMS);
            let cos = [1.0, 0.0, -0.5, 0.0, 1.0 / 24.0, 0.0, -1.0 / 720.0, 0.0, 1.0 / 40320.0, 0.0, -1.0 / 3628800.0];
            for (a, b) in c.iter().zip(cos) {
                assert!((a - b).abs() < 1e-15, "{c:?}");
            }
        }
    }

    #[test]
    fn series_leading_coefficient() {
        let c = frobenius_series(2.0, 1.0, 5.0, SERIES_TERMS);
        assert!((c[2] + 5.0 / (2.0 * 4.0)).abs() < 1e-15);
        assert!(c.iter().skip(1).step_by(2).all(|&v| v == 0.0));
    }

    #[test]
    fn sphere_first_eigenfunction_is_cosine() {
        for n in [2, 3, 5, 9, 16] {
            let p = RadialOdeProblem::new(pair(n - 1, 0), n as f64).unwrap();
            let sol = solve_phi(&p, 401).unwrap();
            assert!(sol.regular_at_far_end);
            for (r, v) in sol.phi.iter() {
                assert!((v - r.cos()).abs() < 1e-8, "n = {n}, r = {r}");
            }
        }
    }

    #[test]
    fn constants_at_zero_eigenvalue() {
        let p = RadialOdeProblem::new(pair(1, 1), 0.0).unwrap();
        let sol = solve_phi(&p, 101).unwrap();
        assert!(sol.phi.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn octonionic_first_eigenfunction() {
        let p = RadialOdeProblem::at_eigenvalue(pair(7, 4), 1).unwrap();
        assert_eq!(p.lambda, 12.0);
        let sol = solve_phi(&p, 201).unwrap();
        for (r, v) in sol.phi.iter() {
            assert!((v - (0.75 * r.cos() + 0.25)).abs() < 1e-8);
        }
    }

    #[test]
    fn invalid_problems() {
        assert!(RadialOdeProblem::new(pair(0, 0), 1.0).is_err());
        assert!(RadialOdeProblem::new(pair(1, 1), -1.0).is_err());
        let p = RadialOdeProblem::new(pair(1, 1), 1.0).unwrap();
        assert!(solve_phi(&p, 8).is_err());
    }

    #[test]
    fn first_polynomial_closed_form() {
        for (a, b) in [(1, 1), (7, 4), (2, 0), (3, 2)] {
            let e = pair(a, b);
            let p = phi_polynomial(&e, 1).unwrap();
            let l1 = a + b + 1;
            assert_eq!(p.coeffs(), &[q(b, l1 + b), q(l1, l1 + b)]);
        }
        let p = phi_polynomial(&pair(1, 1), 1).unwrap();
        assert_eq!(p.coeffs(), &[q(1, 4), q(3, 4)]);
    }

    /// Substitutes `P(cos r)` into the equation symbolically: the residual
    /// `(1 - x^2) P'' - x P' - ((a + b) x + b) P' + lambda P` must vanish.
    fn symbolic_residual(e: &ExponentPair, k: u32, p: &ExactCosPolynomial) -> ExactCosPolynomial {
        let lambda = to_big(e.spectrum(k));
        let ab = to_big(e.alpha() + e.beta());
        let b = to_big(e.beta());
        let one = BigRational::one();
        let zero = BigRational::zero();
        let one_minus_x2 = CosPolynomial::new(vec![one.clone(), zero.clone(), -one.clone()]);
        let x = CosPolynomial::new(vec![zero.clone(), one.clone()]);
        let h_num = CosPolynomial::new(vec![b, ab]);
        let d1 = p.derivative();
        let d2 = d1.derivative();
        let t1 = &one_minus_x2 * &d2;
        let t2 = &x * &d1;
        let t3 = &h_num * &d1;
        let t4 = p.scale(lambda);
        &(&(&t1 - &t2) - &t3) + &t4
    }

    #[test]
    fn polynomials_solve_the_equation_exactly() {
        for (a, b, k) in [(2, 0, 2), (1, 1, 3), (7, 4, 6), (3, 4, 10), (15, 0, 8)] {
            let e = pair(a, b);
            let p = phi_polynomial(&e, k).unwrap();
            assert_eq!(p.degree(), k as usize);
            assert!(p.coefficient_sum().is_one());
            assert!(symbolic_residual(&e, k, &p).is_zero(), "({a}, {b}), k = {k}");
        }
    }

    #[test]
    fn gegenbauer_case() {
        // S^3: Phi_2 = (4 x^2 - 1) / 3, i.e. sin(3r) / (3 sin r)
        let p = phi_polynomial(&pair(2, 0), 2).unwrap();
        assert_eq!(p.coeffs(), &[q(-1, 3), q(0, 1), q(4, 3)]);
    }

    #[test]
    fn polynomial_residuals() {
        let e = pair(1, 1);
        let p = phi_polynomial(&e, 2).unwrap().to_f64();
        let problem = RadialOdeProblem::at_eigenvalue(e, 2).unwrap();
        assert!(phi_residual(PhiSource::Polynomial(&p), &problem) < 1e-12);

        let s = pair(3, 0);
        let cos = CosPolynomial::x();
        let problem = RadialOdeProblem::new(s, 4.0).unwrap();
        assert!(phi_residual(PhiSource::Polynomial(&cos), &problem) <= 1e-10);

        let one = CosPolynomial::constant(1.0);
        let problem = RadialOdeProblem::new(s, 0.0).unwrap();
        assert_eq!(phi_residual(PhiSource::Polynomial(&one), &problem), 0.0);
    }

    #[test]
    fn numeric_and_exact_agree() {
        let e = pair(1, 1);
        let problem = RadialOdeProblem::at_eigenvalue(e, 2).unwrap();
        let sol = solve_phi(&problem, 801).unwrap();
        let p = phi_polynomial(&e, 2).unwrap().to_f64();
        assert!(sol.max_difference(&p) < 1e-6);
        assert!(phi_residual(PhiSource::Numeric(&sol), &problem) < 1e-5);
    }

    #[test]
    fn launch_radius_independence() {
        let problem = RadialOdeProblem::at_eigenvalue(pair(3, 2), 3).unwrap();
        let a = solve_phi_with(&problem, 301, PhiOptions { launch_radius: 1e-3, ..Default::default() }).unwrap();
        let b = solve_phi_with(&problem, 301, PhiOptions { launch_radius: 1e-4, ..Default::default() }).unwrap();
        let worst = a.phi.values.iter().zip(&b.phi.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn non_eigenvalue_is_singular_at_far_end() {
        let e = pair(1, 1);
        let mid = 0.5 * (e.spectrum(2).to_f64().unwrap() + e.spectrum(3).to_f64().unwrap());
        let sol = solve_phi(&RadialOdeProblem::new(e, mid).unwrap(), 401).unwrap();
        assert!(!sol.regular_at_far_end);
        assert!(sol.matching_defect > 1e-3);
        assert!(sol.endpoint_slope().abs() > 1.0);
    }

    #[test]
    fn interpolation_is_accurate() {
        let problem = RadialOdeProblem::new(pair(2, 0), 3.0).unwrap();
        let sol = solve_phi(&problem, 401).unwrap();
        for &r in &[0.123, 1.0, 2.9] {
            let (v, d) = sol.interpolate(r);
            assert!((v - r.cos()).abs() < 1e-10);
            assert!((d + r.sin()).abs() < 1e-7);
        }
    }
}

