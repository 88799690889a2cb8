//! Adaptive Dormand–Prince 5(4) integrator over any vector-like state.
//!
//! Steps are clipped so that every requested output time is hit exactly.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Minimal vector-space interface the integrator needs.
pub trait OdeVector: Clone {
    /// `self += alpha * x`
    fn axpy(&mut self, alpha: f64, x: &Self);

    /// Max over components of `|self_i| / (atol + rtol * max(|a_i|, |b_i|))`.
    fn scaled_error(&self, a: &Self, b: &Self, atol: f64, rtol: f64) -> f64;
}

impl OdeVector for CMatrix {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x.iter()) {
            *s += v * alpha;
        }
    }

    fn scaled_error(&self, a: &Self, b: &Self, atol: f64, rtol: f64) -> f64 {
        let mut worst = 0.0f64;
        for ((e, x), y) in self.iter().zip(a.iter()).zip(b.iter()) {
            let scale = atol + rtol * x.norm().max(y.norm());
            worst = worst.max(e.norm() / scale);
        }
        worst
    }
}

impl OdeVector for Vec<f64> {
    fn axpy(&mut self, alpha: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x.iter()) {
            *s += alpha * v;
        }
    }

    fn scaled_error(&self, a: &Self, b: &Self, atol: f64, rtol: f64) -> f64 {
        let mut worst = 0.0f64;
        for ((e, x), y) in self.iter().zip(a.iter()).zip(b.iter()) {
            let scale = atol + rtol * x.abs().max(y.abs());
            worst = worst.max(e.abs() / scale);
        }
        worst
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub atol: f64,
    pub rtol: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn with_tolerance(tol: f64) -> Self {
        Dopri5 {
            atol: tol,
            rtol: tol,
            h_min: 1e-12,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }

    /// Integrate `y' = f(t, y)` from `t0` and return the state at every entry of `outputs`
    /// (which must be non-decreasing and ≥ `t0`).
    pub fn integrate<V, F>(&self, mut f: F, t0: f64, y0: V, outputs: &[f64]) -> Result<Vec<V>>
    where
        V: OdeVector,
        F: FnMut(f64, &V) -> Result<V>,
    {
        let mut t = t0;
        let mut y = y0;
        let mut result = Vec::with_capacity(outputs.len());
        let mut k1 = f(t, &y)?;
        let mut h: Option<f64> = None;
        let mut steps = 0usize;

        for &target in outputs {
            if target < t - 1e-14 {
                return Err(Error::domain(format!(
                    "output time {target} precedes current time {t}"
                )));
            }
            while target - t > 1e-14 * target.abs().max(1.0) {
                let remaining = target - t;
                let mut step = h
                    .unwrap_or_else(|| self.initial_step(&y, &k1, remaining))
                    .min(self.h_max);
                let clipped = step >= remaining;
                if clipped {
                    step = remaining;
                }
                if step < self.h_min {
                    return Err(Error::StiffnessFailure { t, step });
                }
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::StiffnessFailure { t, step });
                }

                let (y_new, k7, err) = self.attempt(&mut f, t, &y, &k1, step)?;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                if err <= 1.0 {
                    t = if clipped { target } else { t + step };
                    y = y_new;
                    k1 = k7;
                    // a clipped step says nothing about the natural step size
                    if !clipped || h.is_none() {
                        h = Some(step * factor);
                    }
                } else {
                    h = Some(step * factor.min(1.0));
                }
            }
            result.push(y.clone());
        }
        Ok(result)
    }

    fn initial_step<V: OdeVector>(&self, y: &V, k1: &V, span: f64) -> f64 {
        let zero = {
            let mut z = y.clone();
            z.axpy(-1.0, y);
            z
        };
        let y_scale = y.scaled_error(&zero, &zero, self.atol, self.rtol).max(1e-5);
        let f_scale = k1.scaled_error(y, y, self.atol, self.rtol).max(1e-5);
        (0.01 * y_scale / f_scale).min(span).max(self.h_min * 10.0)
    }

    fn attempt<V, F>(&self, f: &mut F, t: f64, y: &V, k1: &V, h: f64) -> Result<(V, V, f64)>
    where
        V: OdeVector,
        F: FnMut(f64, &V) -> Result<V>,
    {
        let stage = |terms: &[(f64, &V)]| {
            let mut s = y.clone();
            for (a, k) in terms {
                s.axpy(h * a, k);
            }
            s
        };
        let k2 = f(t + C2 * h, &stage(&[(A21, k1)]))?;
        let k3 = f(t + C3 * h, &stage(&[(A31, k1), (A32, &k2)]))?;
        let k4 = f(t + C4 * h, &stage(&[(A41, k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = f(
            t + C5 * h,
            &stage(&[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let k6 = f(
            t + h,
            &stage(&[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        )?;
        let y_new = stage(&[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y_new)?;

        let mut err = k1.clone();
        err.axpy(-1.0, k1);
        for (e, k) in [(E1, k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)] {
            err.axpy(h * e, k);
        }
        let norm = err.scaled_error(y, &y_new, self.atol, self.rtol);
        Ok((y_new, k7, norm))
    }
}
