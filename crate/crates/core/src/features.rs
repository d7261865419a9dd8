//! Widths and visibilities of two-scale interference profiles: a broad
//! Gaussian pedestal with a narrow feature at zero delay.

use serde::Serialize;

use crate::constants::FWHM_PER_SIGMA;
use crate::error::{precondition, Result};
use crate::grid::fwhm_at;

/// The core excluded from the pedestal fit spans this many narrow widths.
pub const DEFAULT_MASK_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Polarity {
    Dip,
    Peak,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Features {
    /// Pedestal height at zero delay (baseline removed).
    pub broad_height: f64,
    pub broad_fwhm: Option<f64>,
    /// Signed height of the narrow residual at zero delay.
    pub narrow_height: f64,
    pub narrow_fwhm: Option<f64>,
    /// Local shape of the raw profile at zero delay.
    pub center: Polarity,
}

impl Features {
    /// `I_n / (I_n + I_b)`.
    pub fn sfg_visibility(&self) -> Option<f64> {
        let den = self.narrow_height + self.broad_height;
        if self.narrow_fwhm.is_some() && den > 0.0 {
            Some(self.narrow_height / den)
        } else {
            None
        }
    }
}

/// Least-squares Gaussian `a exp(-τ²/2s²)` on the unmasked samples;
/// returns `(a, s)`.
fn fit_gaussian(tau: &[f64], y: &[f64], mask: f64) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = tau.iter().zip(y).filter(|(t, _)| t.abs() >= mask).map(|(t, v)| (*t, *v)).collect();
    if pts.len() < 5 {
        return None;
    }
    let sse = |s: f64| {
        let (mut yg, mut gg, mut yy) = (0.0, 0.0, 0.0);
        for &(t, v) in &pts {
            let g = (-0.5 * (t / s).powi(2)).exp();
            yg += v * g;
            gg += g * g;
            yy += v * v;
        }
        if gg == 0.0 {
            return (yy, 0.0);
        }
        let a = yg / gg;
        (yy - a * yg, a)
    };
    let dt = (tau[1] - tau[0]).abs();
    let range = tau.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let (lo, hi) = (dt.ln(), (2.0 * range).ln());
    let n = 80;
    let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let best = grid.iter().enumerate().min_by(|a, b| sse(a.1.exp()).0.total_cmp(&sse(b.1.exp()).0)).map(|(k, _)| k)?;
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(n)]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if sse(c.exp()).0 < sse(d.exp()).0 {
            b = d;
        } else {
            a = c;
        }
    }
    let s = (0.5 * (a + b)).exp();
    Some((sse(s).1, s))
}

/// Splits `y(τ)` (baseline already removed, pedestal positive) into a
/// Gaussian pedestal fitted outside a core of `mask_factor` narrow widths
/// and a narrow residual, iterating the core size to a fixed point.
pub fn two_scale(tau: &[f64], y: &[f64], mask_factor: f64) -> Result<Features> {
    if tau.len() != y.len() || tau.len() < 9 {
        return Err(precondition("profile needs matching abscissa and at least 9 samples"));
    }
    let c = tau.iter().enumerate().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map(|(k, _)| k).unwrap_or(0);
    let center = if c == 0 || c + 1 == y.len() {
        Polarity::Flat
    } else if y[c] > y[c - 1] && y[c] > y[c + 1] {
        Polarity::Peak
    } else if y[c] < y[c - 1] && y[c] < y[c + 1] {
        Polarity::Dip
    } else {
        Polarity::Flat
    };
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dt = (tau[1] - tau[0]).abs();
    let split = |mask0: f64| iterate_split(tau, y, c, center, scale, dt, mask0, mask_factor);
    let from_full = split(0.0);
    // When the pedestal is weak the unmasked fit locks onto the central
    // feature itself; restart with the core masked at the raw width.
    if let (Polarity::Peak | Polarity::Dip, Some(broad)) = (center, from_full.broad_fwhm) {
        let sign = if center == Polarity::Peak { 1.0 } else { -1.0 };
        let oriented: Vec<f64> = y.iter().map(|v| sign * v).collect();
        if let Some(raw) = fwhm_at(tau, &oriented, c, oriented[c]) {
            if broad <= 1.5 * raw {
                let masked = split(mask_factor * raw);
                if masked.narrow_fwhm.is_some() && sign * masked.narrow_height > 0.0 {
                    return Ok(masked);
                }
            }
        }
    }
    Ok(from_full)
}

#[allow(clippy::too_many_arguments)]
fn iterate_split(
    tau: &[f64],
    y: &[f64],
    c: usize,
    center: Polarity,
    scale: f64,
    dt: f64,
    mask0: f64,
    mask_factor: f64,
) -> Features {
    let mut mask = mask0;
    let mut result = Features { broad_height: 0.0, broad_fwhm: None, narrow_height: 0.0, narrow_fwhm: None, center };
    for _ in 0..30 {
        let Some((a, s)) = fit_gaussian(tau, y, mask) else { break };
        let resid: Vec<f64> = tau.iter().zip(y).map(|(t, v)| v - a * (-0.5 * (t / s).powi(2)).exp()).collect();
        let h = resid[c];
        let sign = if h < 0.0 { -1.0 } else { 1.0 };
        let oriented: Vec<f64> = resid.iter().map(|v| sign * v).collect();
        // A narrow feature must stand above the fit noise and be clearly
        // narrower than the pedestal.
        let width = if h.abs() > 1e-6 * scale { fwhm_at(tau, &oriented, c, h.abs()) } else { None }
            .filter(|w| *w < 0.7 * FWHM_PER_SIGMA * s);
        let current = Features {
            broad_height: a,
            broad_fwhm: Some(FWHM_PER_SIGMA * s),
            narrow_height: if width.is_some() { h } else { 0.0 },
            narrow_fwhm: width,
            center,
        };
        // A wider core can destabilize the pedestal fit of a non-Gaussian
        // profile; keep the last split that still resolved the feature.
        let Some(w) = width else {
            if result.narrow_fwhm.is_none() {
                result = current;
            }
            break;
        };
        result = current;
        let next = mask_factor * w;
        if (next - mask).abs() < 0.5 * dt {
            break;
        }
        mask = next;
    }
    result
}

/// Features of a sum-frequency profile.
pub fn sfg_features(tau: &[f64], intensity: &[f64], mask_factor: f64) -> Result<Features> {
    two_scale(tau, intensity, mask_factor)
}

/// Features of a normalized HOM profile, analysed as `1 - R(τ)`; the
/// reported polarity refers to `R` itself.
pub fn hom_features(tau: &[f64], r: &[f64], mask_factor: f64) -> Result<Features> {
    let y: Vec<f64> = r.iter().map(|v| 1.0 - v).collect();
    let mut f = two_scale(tau, &y, mask_factor)?;
    f.center = match f.center {
        Polarity::Dip => Polarity::Peak,
        Polarity::Peak => Polarity::Dip,
        Polarity::Flat => Polarity::Flat,
    };
    Ok(f)
}

/// `(R_max - R_min) / R_max`.
pub fn hom_visibility(r: &[f64]) -> Option<f64> {
    let max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = r.iter().copied().fold(f64::INFINITY, f64::min);
    if max > 0.0 {
        Some((max - min) / max)
    } else {
        None
    }
}
