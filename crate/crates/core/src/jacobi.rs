//! Jacobi tensors along a unit-speed geodesic.
//!
//! In a parallel orthonormal frame of the normal bundle the associated Jacobi
//! tensor solves `J'' + R(r) J = 0` with `J(0) = 0` and `J'(0) = I`. Its
//! determinant is `r^(n-1) omega(r)` and `tr(J' J^-1)` is the mean curvature of
//! the geodesic sphere of radius `r`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_spaces::ModelSpace;
use crate::ode::{self, Tolerance};
use crate::profile::{uniform_grid, RadialProfile};

type FieldFn = dyn Fn(f64) -> DMatrix<f64> + Send + Sync;

/// The curvature operator `R(., gamma') gamma'` along a geodesic, expressed in a
/// parallel orthonormal frame of the normal bundle.
#[derive(Clone)]
pub struct CurvatureField {
    dim: usize,
    kind: FieldKind,
}

#[derive(Clone)]
enum FieldKind {
    Constant(DMatrix<f64>),
    Variable(Arc<FieldFn>),
}

impl fmt::Debug for CurvatureField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Constant(m) => f.debug_tuple("CurvatureField::Constant").field(m).finish(),
            FieldKind::Variable(_) => write!(f, "CurvatureField::Variable(dim = {})", self.dim),
        }
    }
}

impl CurvatureField {
    pub fn constant(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        let asymmetry = asymmetry(&matrix);
        if asymmetry > 1e-12 * (1.0 + matrix.amax()) {
            return Err(Error::AsymmetricField { r: 0.0, asymmetry });
        }
        Ok(CurvatureField { dim: matrix.nrows(), kind: FieldKind::Constant(matrix) })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(values));
        CurvatureField { dim: values.len(), kind: FieldKind::Constant(m) }
    }

    pub fn zero(dim: usize) -> Self {
        CurvatureField { dim, kind: FieldKind::Constant(DMatrix::zeros(dim, dim)) }
    }

    /// The parallel curvature operator of a model space, diagonal in an adapted frame.
    pub fn for_space(space: &ModelSpace) -> Self {
        Self::diagonal(&space.curvature_spectrum().diagonal())
    }

    /// A radius-dependent field. Symmetry is checked on every output grid point
    /// during integration.
    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
    {
        CurvatureField { dim, kind: FieldKind::Variable(Arc::new(f)) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, FieldKind::Constant(_))
    }

    pub fn eval(&self, r: f64) -> DMatrix<f64> {
        match &self.kind {
            FieldKind::Constant(m) => m.clone(),
            FieldKind::Variable(f) => f(r),
        }
    }

    /// The field seen from the far end: `t -> R(end - t)`.
    pub fn reversed(&self, end: f64) -> Self {
        match &self.kind {
            FieldKind::Constant(_) => self.clone(),
            FieldKind::Variable(f) => {
                let f = Arc::clone(f);
                CurvatureField::from_fn(self.dim, move |t| f(end - t))
            }
        }
    }

    fn check_at(&self, r: f64) -> Result<()> {
        let m = self.eval(r);
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: m.nrows() });
        }
        let a = asymmetry(&m);
        if a > 1e-12 * (1.0 + m.amax()) {
            return Err(Error::AsymmetricField { r, asymmetry: a });
        }
        Ok(())
    }

    /// Taylor coefficients `R(0)`, `R'(0)` and `R''(0) / 2`.
    fn taylor_at_origin(&self) -> [DMatrix<f64>; 3] {
        match &self.kind {
            FieldKind::Constant(m) => [m.clone(), DMatrix::zeros(self.dim, self.dim), DMatrix::zeros(self.dim, self.dim)],
            FieldKind::Variable(f) => {
                // one-sided second-order differences; the field need not exist for r < 0
                let d = 1e-3;
                let (r0, r1, r2, r3) = (f(0.0), f(d), f(2.0 * d), f(3.0 * d));
                let first = (&r1 * 4.0 - &r0 * 3.0 - &r2) / (2.0 * d);
                let second = (&r0 * 2.0 - &r1 * 5.0 + &r2 * 4.0 - &r3) / (d * d);
                [r0, first, second * 0.5]
            }
        }
    }
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JacobiOptions {
    /// Radius at which the series solution hands over to the integrator.
    /// Defaults to `min(1e-3, r_max / 1000)`.
    pub launch_radius: Option<f64>,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions { launch_radius: None, rtol: 1e-13, atol: 1e-15 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegratorMeta {
    pub method: &'static str,
    pub order: u32,
    pub launch_radius: f64,
    pub series_order: u32,
    pub rtol: f64,
    pub atol: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Sampled solution `(J, J')` of the Jacobi equation.
#[derive(Debug, Clone)]
pub struct JacobiTrajectory {
    pub grid: Vec<f64>,
    pub j: Vec<DMatrix<f64>>,
    pub dj: Vec<DMatrix<f64>>,
    pub meta: IntegratorMeta,
}

/// Integrates on a uniform grid of `grid_size` points over `[0, r_max]`.
pub fn integrate_jacobi(field: &CurvatureField, r_max: f64, grid_size: usize) -> Result<JacobiTrajectory> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
    }
    if grid_size < 16 {
        return Err(Error::InvalidArgument(format!("grid_size must be at least 16, got {grid_size}")));
    }
    integrate_jacobi_on(field, &uniform_grid(0.0, r_max, grid_size), JacobiOptions::default())
}

/// Integrates on an arbitrary strictly increasing grid of nonnegative radii.
pub fn integrate_jacobi_on(
    field: &CurvatureField,
    grid: &[f64],
    opts: JacobiOptions,
) -> Result<JacobiTrajectory> {
    if grid.is_empty() || grid[0] < 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("grid must be nonnegative and strictly increasing".into()));
    }
    let r_max = *grid.last().unwrap();
    let eps = opts.launch_radius.unwrap_or((r_max / 1000.0).min(1e-3));
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("launch radius must be positive, got {eps}")));
    }
    for &r in grid {
        field.check_at(r)?;
    }

    let d = field.dim();
    let d2 = d * d;
    let taylor = field.taylor_at_origin();
    let series = |r: f64| series_solution(&taylor, r);

    let mut js = Vec::with_capacity(grid.len());
    let mut djs = Vec::with_capacity(grid.len());
    let split = grid.partition_point(|&r| r <= eps);
    for &r in &grid[..split] {
        let (j, dj) = series(r);
        js.push(j);
        djs.push(dj);
    }

    let tol = Tolerance { rtol: opts.rtol, atol: opts.atol };
    let mut stats = ode::Stats::default();
    if split < grid.len() {
        let (j0, dj0) = series(eps);
        let mut y0 = Vec::with_capacity(2 * d2);
        y0.extend_from_slice(j0.as_slice());
        y0.extend_from_slice(dj0.as_slice());

        let constant = match &field.kind {
            FieldKind::Constant(m) => Some(m.clone()),
            FieldKind::Variable(_) => None,
        };
        let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
            dy[..d2].copy_from_slice(&y[d2..]);
            let j = DMatrixView::from_slice(&y[..d2], d, d);
            let mut out = DMatrixViewMut::from_slice(&mut dy[d2..], d, d);
            match &constant {
                Some(r) => out.gemm(-1.0, r, &j, 0.0),
                None => out.gemm(-1.0, &field.eval(t), &j, 0.0),
            }
        };
        let (states, st) = ode::integrate(rhs, eps, &y0, &grid[split..], tol)?;
        stats = st;
        for y in states {
            js.push(DMatrix::from_column_slice(d, d, &y[..d2]));
            djs.push(DMatrix::from_column_slice(d, d, &y[d2..]));
        }
    }

    Ok(JacobiTrajectory {
        grid: grid.to_vec(),
        j: js,
        dj: djs,
        meta: IntegratorMeta {
            method: "dormand-prince 5(4)",
            order: 5,
            launch_radius: eps,
            series_order: 5,
            rtol: opts.rtol,
            atol: opts.atol,
            accepted_steps: stats.accepted,
            rejected_steps: stats.rejected,
        },
    })
}

/// Fifth-order series `J = rI - r^3/6 R0 - r^4/12 R1 + r^5/20 (R0^2/6 - R2)`
/// with `R(r) = R0 + R1 r + R2 r^2 + ...`.
fn series_solution(taylor: &[DMatrix<f64>; 3], r: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let [r0, r1, r2] = taylor;
    let d = r0.nrows();
    let id = DMatrix::<f64>::identity(d, d);
    let c5 = (r0 * r0 / 6.0 - r2) / 20.0;
    let j = &id * r - r0 * (r.powi(3) / 6.0) - r1 * (r.powi(4) / 12.0) + &c5 * r.powi(5);
    let dj = &id - r0 * (r * r / 2.0) - r1 * (r.powi(3) / 3.0) + &c5 * (5.0 * r.powi(4));
    (j, dj)
}

impl JacobiTrajectory {
    /// Dimension of the normal space, `n - 1`.
    pub fn dim(&self) -> usize {
        self.j.first().map_or(0, |m| m.nrows())
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn determinants(&self) -> Vec<f64> {
        self.j.iter().map(|m| m.clone().lu().determinant()).collect()
    }

    /// Grid indices at which `det J` changes sign relative to the previous sample.
    ///
    /// The frame is fixed so that `det J > 0` right after launch; a sign change
    /// marks a conjugate point that was stepped over.
    pub fn sign_changes(&self) -> Vec<usize> {
        let dets = self.determinants();
        let mut out = Vec::new();
        let mut last_sign = 1.0;
        for (i, &v) in dets.iter().enumerate().skip(1) {
            if v != 0.0 {
                if v.signum() != last_sign {
                    out.push(i);
                }
                last_sign = v.signum();
            }
        }
        out
    }

    /// `max_i || J^T J' - J'^T J ||_inf`, which vanishes for symmetric fields.
    pub fn wronskian_defect(&self) -> f64 {
        self.j
            .iter()
            .zip(&self.dj)
            .map(|(j, dj)| {
                let w = j.transpose() * dj - dj.transpose() * j;
                w.amax()
            })
            .fold(0.0, f64::max)
    }

    /// `max || J'' + R J ||` over interior points of a uniform grid, with `J''`
    /// taken from fourth-order central differences of `J'`.
    pub fn ode_residual(&self, field: &CurvatureField) -> Result<f64> {
        let n = self.grid.len();
        if n < 5 {
            return Err(Error::InsufficientResolution("need at least 5 grid points".into()));
        }
        let h = self.grid[1] - self.grid[0];
        if self.grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0)) {
            return Err(Error::InvalidArgument("ode_residual needs a uniform grid".into()));
        }
        let mut worst = 0.0f64;
        for i in 2..n - 2 {
            let ddj = (&self.dj[i - 2] - &self.dj[i - 1] * 8.0 + &self.dj[i + 1] * 8.0 - &self.dj[i + 2]) / (12.0 * h);
            let res = ddj + field.eval(self.grid[i]) * &self.j[i];
            worst = worst.max(res.amax());
        }
        Ok(worst)
    }

    fn check_dimension(&self, n: usize) -> Result<()> {
        if n == 0 || self.dim() != n - 1 {
            return Err(Error::DimensionMismatch { expected: n.saturating_sub(1), got: self.dim() });
        }
        Ok(())
    }

    /// Mean curvature `tr(J' J^-1)` at grid index `i`.
    pub fn mean_curvature_at(&self, i: usize) -> Result<f64> {
        let r = self.grid[i];
        let lu = self.j[i].clone().lu();
        let det = lu.determinant();
        let scale = r.powi(self.dim() as i32);
        if r <= 0.0 || !(det.abs() >= 1e-10 * scale) {
            return Err(Error::Singular { r });
        }
        let x = lu.solve(&self.dj[i]).ok_or(Error::Singular { r })?;
        Ok(x.trace())
    }
}

/// `omega(r) = r^(1-n) det J(r)`, with `omega(0) = 1`.
pub fn density_profile(traj: &JacobiTrajectory, n: usize) -> Result<RadialProfile> {
    traj.check_dimension(n)?;
    let values = traj
        .grid
        .iter()
        .zip(traj.determinants())
        .map(|(&r, det)| if r == 0.0 { 1.0 } else { det / r.powi(n as i32 - 1) })
        .collect();
    RadialProfile::new("omega", traj.grid.clone(), values)
}

/// `r^(n-1) omega(r) = det J(r)`.
pub fn volume_density_profile(traj: &JacobiTrajectory) -> Result<RadialProfile> {
    RadialProfile::new("omega_hat", traj.grid.clone(), traj.determinants())
}

/// Mean curvature of geodesic spheres on the positive grid points.
pub fn mean_curvature_profile(traj: &JacobiTrajectory) -> Result<RadialProfile> {
    let mut grid = Vec::with_capacity(traj.len());
    let mut values = Vec::with_capacity(traj.len());
    for (i, &r) in traj.grid.iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        grid.push(r);
        values.push(traj.mean_curvature_at(i)?);
    }
    RadialProfile::new("mean_curvature", grid, values)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvolutionCheck {
    /// `|det J(r) - det K(r)|` for the forward and reversed Jacobi tensors.
    pub discrepancy: f64,
    /// Largest entrywise change of `(J^T)' K - J^T K'` along the grid.
    pub conserved_drift: f64,
    /// `|| K(r) - J(r)^T ||`, the conserved section evaluated at both ends.
    pub transpose_defect: f64,
}

/// Compares the Jacobi tensor of a geodesic segment of length `r` with that of
/// the reversed segment, and tracks the conserved section linking them.
pub fn involution_symmetry_check(field: &CurvatureField, r: f64) -> Result<InvolutionCheck> {
    involution_symmetry_check_with(field, r, 257)
}

pub fn involution_symmetry_check_with(
    field: &CurvatureField,
    r: f64,
    grid_size: usize,
) -> Result<InvolutionCheck> {
    let forward = integrate_jacobi(field, r, grid_size)?;
    let backward = integrate_jacobi(&field.reversed(r), r, grid_size)?;
    let last = grid_size - 1;

    // K(t) = Kbar(r - t), K'(t) = -Kbar'(r - t)
    let section = |i: usize| {
        let k = &backward.j[last - i];
        let dk = -&backward.dj[last - i];
        forward.dj[i].transpose() * k - forward.j[i].transpose() * dk
    };
    let start = section(0);
    let drift = (1..grid_size).map(|i| (section(i) - &start).amax()).fold(0.0, f64::max);

    let det_forward = forward.j[last].clone().lu().determinant();
    let det_backward = backward.j[last].clone().lu().determinant();
    Ok(InvolutionCheck {
        discrepancy: (det_forward - det_backward).abs(),
        conserved_drift: drift,
        transpose_defect: (&backward.j[last] - forward.j[last].transpose()).amax(),
    })
}

/// `ric = -(3/2) (r H(r))''(0)`, extrapolated from samples near the origin.
///
/// Samples are taken near `0.32 / 2^k`; the quotient `(r H - (n - 1)) / r^2`
/// is extrapolated to `r = 0` with Neville's scheme.
pub fn ricci_from_mean_curvature(h: &RadialProfile, n: usize) -> Result<f64> {
    let positive: Vec<(f64, f64)> = h.iter().filter(|&(r, _)| r > 0.0).collect();
    let spacing = positive.windows(2).map(|w| w[1].0 - w[0].0).fold(f64::INFINITY, f64::min);
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    let mut target = 0.32;
    while target >= 0.5 * spacing.min(1.0) && nodes.len() < 6 {
        let nearest = positive
            .iter()
            .copied()
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()));
        if let Some(p) = nearest {
            if (p.0 - target).abs() <= 0.25 * target && nodes.last().is_none_or(|q| q.0 != p.0) {
                nodes.push(p);
            }
        }
        target /= 2.0;
    }
    let smallest = nodes.last().map_or(f64::INFINITY, |p| p.0);
    if nodes.len() < 4 || smallest >= 0.05 {
        return Err(Error::InsufficientResolution(format!(
            "need mean-curvature samples near 0.32 / 2^k reaching below r = 0.05 (found {} usable, smallest {smallest})",
            nodes.len()
        )));
    }
    let samples: Vec<(f64, f64)> = nodes
        .iter()
        .map(|&(r, hv)| (r, (r * hv - (n as f64 - 1.0)) / (r * r)))
        .collect();
    let c2 = neville_at_zero(&samples);
    Ok(-3.0 * c2)
}

fn neville_at_zero(samples: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let mut p: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let m = p.len();
    for level in 1..m {
        for i in 0..m - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}
