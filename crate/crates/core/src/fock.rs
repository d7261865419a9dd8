//! Exact propagation of one trilinear triplet in a truncated Fock space.
//!
//! Starting from `|0, 0, N⟩` the generator `K (a_p a_s† a_i† - h.c.)` keeps
//! `n_s = n_i` and `n_s + n_p = N`, so the state lives on the `N + 1`
//! vectors `|k, k, N - k⟩`. With `N <= cutoff` that sector is complete, so
//! no population can leak past the cutoff.

use nalgebra::{DMatrix, DVector};

use crate::error::{precondition, Error, Result};
use crate::statistics::{Field, GaussianTripletState, Pair};

/// Largest supported cutoff.
pub const MAX_CUTOFF: usize = 30;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    /// Amplitude of `|k, k, n_p0 - k⟩` at index `k`.
    amplitudes: DVector<f64>,
    n_p0: usize,
    cutoff: usize,
}

impl FockState {
    pub fn initial(n_p0: usize, cutoff: usize) -> Result<Self> {
        check_sizes(n_p0, cutoff)?;
        let mut amplitudes = DVector::zeros(n_p0 + 1);
        amplitudes[0] = 1.0;
        Ok(Self { amplitudes, n_p0, cutoff })
    }

    pub fn amplitudes(&self) -> &DVector<f64> {
        &self.amplitudes
    }

    pub fn n_p0(&self) -> usize {
        self.n_p0
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Probability of `k` pairs.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    fn moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.amplitudes.iter().enumerate().map(|(k, a)| a * a * f(k as f64)).sum()
    }

    pub fn mean_signal(&self) -> f64 {
        self.moment(|k| k)
    }

    pub fn mean_pump(&self) -> f64 {
        let n = self.n_p0 as f64;
        self.moment(|k| n - k)
    }

    /// `⟨Δn_s²⟩`, not normally ordered.
    pub fn variance_signal(&self) -> f64 {
        let m = self.mean_signal();
        self.moment(|k| k * k) - m * m
    }

    /// `⟨Δn_s Δn_i⟩`; equals the signal variance inside the sector.
    pub fn covariance_si(&self) -> f64 {
        self.variance_signal()
    }
}

fn check_sizes(n_p0: usize, cutoff: usize) -> Result<()> {
    if cutoff > MAX_CUTOFF {
        return Err(precondition(format!("cutoff {cutoff} exceeds {MAX_CUTOFF}")));
    }
    if n_p0 > cutoff {
        return Err(precondition(format!("n_p0 = {n_p0} exceeds cutoff {cutoff}")));
    }
    Ok(())
}

/// Real antisymmetric generator on the pair sector, already scaled by `K`.
pub fn sector_generator(coupling: f64, n_p0: usize) -> DMatrix<f64> {
    let d = n_p0 + 1;
    let mut h = DMatrix::zeros(d, d);
    for k in 0..n_p0 {
        let g = coupling * (k + 1) as f64 * ((n_p0 - k) as f64).sqrt();
        h[(k + 1, k)] = g;
        h[(k, k + 1)] = -g;
    }
    h
}

/// Propagates `|0, 0, n_p0⟩` to `z`.
pub fn trilinear_propagate(coupling: f64, n_p0: usize, z: f64, cutoff: usize) -> Result<FockState> {
    check_sizes(n_p0, cutoff)?;
    if !(coupling >= 0.0 && coupling.is_finite()) {
        return Err(precondition(format!("coupling must be finite and non-negative, got {coupling}")));
    }
    if !(z >= 0.0 && z.is_finite()) {
        return Err(precondition(format!("length must be finite and non-negative, got {z}")));
    }
    let mut state = FockState::initial(n_p0, cutoff)?;
    if coupling == 0.0 || z == 0.0 || n_p0 == 0 {
        return Ok(state);
    }
    let evo = (sector_generator(coupling, n_p0) * z).exp();
    state.amplitudes = evo.column(0).into_owned();

    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Consistency(format!("norm drifted to {norm:.3e}")));
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub model: f64,
    pub exact: f64,
}

impl Comparison {
    /// `|model - exact| / |exact|`, or the absolute difference when the
    /// exact value vanishes.
    pub fn relative_error(&self) -> f64 {
        let diff = (self.model - self.exact).abs();
        if self.exact == 0.0 {
            diff
        } else {
            diff / self.exact.abs()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub mean_signal: Comparison,
    pub variance_signal: Comparison,
    pub covariance_si: Comparison,
    pub mean_pump: Comparison,
}

impl OracleReport {
    pub fn max_relative_error(&self) -> f64 {
        [self.mean_signal, self.variance_signal, self.covariance_si, self.mean_pump]
            .iter()
            .map(Comparison::relative_error)
            .fold(0.0, f64::max)
    }
}

/// Compares photon-number moments of the Gaussian model with the exact
/// state. The model's normally ordered variance is converted back by adding
/// the mean.
pub fn oracle_compare(model: &GaussianTripletState, exact: &FockState) -> OracleReport {
    let n_s = model.intensity(Field::Signal);
    OracleReport {
        mean_signal: Comparison { model: n_s, exact: exact.mean_signal() },
        variance_signal: Comparison { model: model.variance(Field::Signal) + n_s, exact: exact.variance_signal() },
        covariance_si: Comparison { model: model.covariance(Pair::SignalIdler), exact: exact.covariance_si() },
        mean_pump: Comparison { model: model.intensity(Field::Pump), exact: exact.mean_pump() },
    }
}
