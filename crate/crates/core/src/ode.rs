//! Dormand–Prince 5(4) integrator for small fixed-size real systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { atol: 1e-14, rtol: 1e-14, max_steps: 500_000 }
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
// b - b*, the difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `dy/dz = rhs(z, y)` from `z0` to `z1` and returns `y(z1)`.
pub fn integrate<const N: usize, F>(rhs: F, z0: f64, z1: f64, y0: [f64; N], tol: Tolerance) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let span = z1 - z0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut z = z0;
    let mut y = y0;
    let mut k1 = rhs(z, &y);

    // Initial step from the scale of the derivative.
    let scale = |y: &[f64; N], i: usize| tol.atol + tol.rtol * y[i].abs();
    let d0 = (0..N).map(|i| (y[i] / scale(&y, i)).powi(2)).sum::<f64>().sqrt();
    let d1 = (0..N).map(|i| (k1[i] / scale(&y, i)).powi(2)).sum::<f64>().sqrt();
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span.abs() } else { 0.01 * d0 / d1 };
    h = h.min(span.abs()).max(1e-12 * span.abs());

    let mut last_err = 0.0;
    for _ in 0..tol.max_steps {
        let remaining = (z1 - z) * dir;
        if remaining <= 1e-15 * span.abs() {
            return Ok(y);
        }
        if h > remaining {
            h = remaining;
        }
        let hs = h * dir;
        let k2 = rhs(z + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = rhs(z + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(z + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(z + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(z + hs, &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = rhs(z + hs, &y_new);

        let mut err = 0.0;
        for i in 0..N {
            let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / N as f64).sqrt();
        last_err = err;

        if err <= 1.0 {
            z += hs;
            y = y_new;
            k1 = k7;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h < 1e-14 * span.abs() {
            break;
        }
    }
    Err(Error::Numerical { requested: tol.rtol, achieved: tol.rtol * last_err, at: z })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let y = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, 10.0, [1.0, 0.0], Tolerance::default()).unwrap();
        assert!((y[0] - 10f64.cos()).abs() < 1e-10);
        assert!((y[1] + 10f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn backward_integration() {
        let y = integrate(|_, y: &[f64; 1]| [y[0]], 1.0, 0.0, [1f64.exp()], Tolerance::default()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-11);
    }

    #[test]
    fn step_budget_exhaustion_is_reported() {
        let tol = Tolerance { max_steps: 3, ..Tolerance::default() };
        let r = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, 100.0, [1.0, 0.0], tol);
        assert!(matches!(r, Err(Error::Numerical { .. })));
    }
}
