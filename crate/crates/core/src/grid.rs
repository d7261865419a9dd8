//! Uniform sampling grids and the quadrature rule shared by every module.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// Uniform angular-frequency grid, symmetric about its center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    center: f64,
    half_span: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(center: f64, half_span: f64, n_points: usize) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(precondition(format!(
                "frequency grid needs at least {} points, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        if !(half_span > 0.0 && half_span.is_finite()) {
            return Err(precondition(format!("half_span must be positive, got {half_span}")));
        }
        if !center.is_finite() {
            return Err(precondition("grid center must be finite"));
        }
        Ok(Self { center, half_span, n_points })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_span(&self) -> f64 {
        self.half_span
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_span / (self.n_points - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        self.center - self.half_span + k as f64 * self.step()
    }

    /// Offset of sample `k` from the grid center.
    pub fn offset(&self, k: usize) -> f64 {
        -self.half_span + k as f64 * self.step()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.point(k)).collect()
    }

    /// Trapezoid weight of sample `k`.
    pub fn weight(&self, k: usize) -> f64 {
        let h = self.step();
        if k == 0 || k + 1 == self.n_points {
            0.5 * h
        } else {
            h
        }
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_points);
        values.iter().enumerate().map(|(k, v)| self.weight(k) * v).sum()
    }

    /// `∫ conj(a) b dω`.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        debug_assert_eq!(a.len(), self.n_points);
        a.iter().zip(b).enumerate().map(|(k, (x, y))| x.conj() * y * self.weight(k)).sum()
    }

    pub fn norm_sqr(&self, a: &[Complex64]) -> f64 {
        a.iter().enumerate().map(|(k, x)| x.norm_sqr() * self.weight(k)).sum()
    }

    /// Grid with the same step and `factor` times the half-span, centered at `center`.
    pub fn widened(&self, center: f64, factor: usize) -> Result<Self> {
        Self::new(center, self.half_span * factor as f64, (self.n_points - 1) * factor + 1)
    }

    /// Grid over the same span with the step divided by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.center, self.half_span, (self.n_points - 1) * factor + 1)
    }
}

/// Uniform time grid `t_j = j' dt` with `j' = j - (n - 1)/2`; `n` is odd so
/// that `t = 0` is a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    step: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(step: f64, n_points: usize) -> Result<Self> {
        if n_points.is_multiple_of(2) || n_points < 3 {
            return Err(precondition(format!("time grid needs an odd point count >= 3, got {n_points}")));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(precondition(format!("time step must be positive, got {step}")));
        }
        Ok(Self { step, n_points })
    }

    /// Time grid conjugate to `freq` under a DFT of length
    /// `oversample * freq.len()` (rounded up to odd).
    pub fn conjugate(freq: &FrequencyGrid, oversample: usize) -> Result<Self> {
        let mut n = freq.len() * oversample.max(1);
        if n.is_multiple_of(2) {
            n += 1;
        }
        Self::new(2.0 * std::f64::consts::PI / (n as f64 * freq.step()), n)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn half_len(&self) -> usize {
        (self.n_points - 1) / 2
    }

    /// Signed sample index of position `j`.
    pub fn signed_index(&self, j: usize) -> isize {
        j as isize - self.half_len() as isize
    }

    pub fn point(&self, j: usize) -> f64 {
        self.signed_index(j) as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.point(j)).collect()
    }

    pub fn span(&self) -> f64 {
        (self.n_points - 1) as f64 * self.step
    }
}

/// Linear interpolation of the abscissa where `y` crosses `level` between
/// samples `a` and `b`.
pub(crate) fn crossing(x: &[f64], y: &[f64], a: usize, b: usize, level: f64) -> f64 {
    let (ya, yb) = (y[a], y[b]);
    if (yb - ya).abs() < f64::MIN_POSITIVE {
        return 0.5 * (x[a] + x[b]);
    }
    x[a] + (level - ya) * (x[b] - x[a]) / (yb - ya)
}

/// Full width at half maximum of the peak containing the global maximum of
/// `y`, with interpolated crossings. `None` if a crossing is not found.
pub fn fwhm(x: &[f64], y: &[f64]) -> Option<f64> {
    let (imax, &ymax) =
        y.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))?;
    fwhm_at(x, y, imax, ymax)
}

/// FWHM of the peak at `center` of height `height` (relative to zero).
pub fn fwhm_at(x: &[f64], y: &[f64], center: usize, height: f64) -> Option<f64> {
    if !(height > 0.0) {
        return None;
    }
    let half = 0.5 * height;
    let mut right = None;
    for k in center..y.len().saturating_sub(1) {
        if y[k] >= half && y[k + 1] < half {
            right = Some(crossing(x, y, k, k + 1, half));
            break;
        }
    }
    let mut left = None;
    for k in (1..=center).rev() {
        if y[k] >= half && y[k - 1] < half {
            left = Some(crossing(x, y, k - 1, k, half));
            break;
        }
    }
    Some(right? - left?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_symmetric() {
        let g = FrequencyGrid::new(10.0, 2.0, 17).unwrap();
        assert!((g.point(0) - 8.0).abs() < 1e-12);
        assert!((g.point(16) - 12.0).abs() < 1e-12);
        assert!((g.point(8) - 10.0).abs() < 1e-12);
        assert!(FrequencyGrid::new(0.0, 1.0, 15).is_err());
        assert!(FrequencyGrid::new(0.0, -1.0, 32).is_err());
    }

    #[test]
    fn gaussian_fwhm() {
        let x: Vec<f64> = (0..2001).map(|k| -10.0 + 0.01 * k as f64).collect();
        let y: Vec<f64> = x.iter().map(|t| (-t * t / 2.0).exp()).collect();
        let w = fwhm(&x, &y).unwrap();
        assert!((w - crate::constants::FWHM_PER_SIGMA).abs() < 1e-4);
    }

    #[test]
    fn conjugate_time_grid_is_odd() {
        let g = FrequencyGrid::new(0.0, 1.0, 64).unwrap();
        let t = TimeGrid::conjugate(&g, 2).unwrap();
        assert_eq!(t.len() % 2, 1);
        assert_eq!(t.point(t.half_len()), 0.0);
    }
}
