//! Adaptive Dormand-Prince 5(4) integration for first-order systems.
//!
//! Steps are clipped so that every requested output point is hit exactly,
//! which keeps the solution on the caller's grid without interpolation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rtol: 1e-13, atol: 1e-15 }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

const MAX_STEPS: usize = 2_000_000;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// difference between the 5th- and 4th-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `(t0, y0)` and returns the state at each
/// point of `outputs`, which must be monotone and on one side of `t0`.
pub(crate) fn integrate<F>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    outputs: &[f64],
    tol: Tolerance,
) -> Result<(Vec<Vec<f64>>, Stats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let dim = y0.len();
    let mut stats = Stats::default();
    let mut out = Vec::with_capacity(outputs.len());
    let Some(&last) = outputs.last() else {
        return Ok((out, stats));
    };
    let dir = if last >= t0 { 1.0 } else { -1.0 };
    if outputs.iter().any(|&t| (t - t0) * dir < 0.0)
        || outputs.windows(2).any(|w| (w[1] - w[0]) * dir < 0.0)
    {
        return Err(Error::InvalidArgument("output points are not monotone".into()));
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    f(t, &y, &mut k[0]);

    let span = (last - t0).abs();
    let mut h = (span * 1e-3).max(1e-6).min(span.max(1e-6));

    for &target in outputs {
        while (target - t) * dir > 0.0 {
            if stats.accepted + stats.rejected > MAX_STEPS {
                return Err(Error::Divergence { r: t, reason: "step budget exhausted".into() });
            }
            let remaining = (target - t).abs();
            let last_step = h >= remaining;
            let step = if last_step { remaining } else { h };
            let hs = step * dir;

            for s in 1..7 {
                for i in 0..dim {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    stage[i] = y[i] + hs * acc;
                }
                f(t + C[s] * hs, &stage, &mut k[s]);
                if s == 6 {
                    y_new.copy_from_slice(&stage);
                }
            }

            let mut err = 0.0;
            for i in 0..dim {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
                let q = hs * e / sc;
                err += q * q;
            }
            let err = (err / dim.max(1) as f64).sqrt();
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                if step < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::Divergence { r: t, reason: "non-finite state".into() });
                }
                stats.rejected += 1;
                h = step * 0.1;
                continue;
            }

            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                stats.accepted += 1;
                t = if last_step { target } else { t + hs };
                std::mem::swap(&mut y, &mut y_new);
                // first-same-as-last
                let (first, rest) = k.split_at_mut(1);
                first[0].copy_from_slice(&rest[5]);
                if !last_step {
                    h = step * factor;
                }
            } else {
                stats.rejected += 1;
                h = step * factor.min(1.0);
                if h < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::Divergence { r: t, reason: "step size underflow".into() });
                }
            }
        }
        out.push(y.clone());
    }
    Ok((out, stats))
}
