//! Temporal modes, photon fluxes, the sum-frequency interference profile
//! and the Hong-Ou-Mandel correlation functions.
//!
//! Temporal modes are stored as envelopes with the carrier `e^{-iω⁰t}`
//! removed; every quantity below depends on them only through moduli or
//! through products in which the carrier cancels.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::schmidt::{SchmidtBasis, SpectralModeSet};
use crate::statistics::{Field, GaussianTripletState, Pair};
use crate::twinbeam::TwinBeamState;

/// Largest spectral or temporal mass fraction allowed in the three outer
/// samples at either end of a grid.
const EDGE_MASS: f64 = 1e-6;
const EDGE_SAMPLES: usize = 3;

#[derive(Debug, Clone)]
pub struct TemporalModeSet {
    grid: TimeGrid,
    center: f64,
    modes: Vec<Vec<Complex64>>,
}

impl TemporalModeSet {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Carrier frequency removed from the envelopes, rad/s.
    pub fn carrier(&self) -> f64 {
        self.center
    }

    pub fn mode(&self, q: usize) -> &[Complex64] {
        &self.modes[q]
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `∫ |f̃_q(t)|² dt`.
    pub fn norm_sqr(&self, q: usize) -> f64 {
        self.modes[q].iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.step()
    }
}

fn edge_fraction(values: &[f64]) -> f64 {
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let n = values.len();
    let k = EDGE_SAMPLES.min(n / 2);
    let edge: f64 = values[..k].iter().chain(&values[n - k..]).sum();
    edge / total
}

/// Spectral weights `w_k √(ω_k/ω⁰) f(ω_k)` of the transform.
fn weighted_spectrum(grid: &FrequencyGrid, f: &[Complex64]) -> Vec<Complex64> {
    (0..grid.len()).map(|k| f[k] * grid.weight(k) * (grid.point(k) / grid.center()).sqrt()).collect()
}

/// `f̃(t) = (2π)^{-1/2} ∫ dω √(ω/ω⁰) f(ω) e^{-iωt}` on the time grid
/// conjugate to the spectral grid, by FFT.
pub fn temporal_modes(spectral: &SpectralModeSet, grid: &TimeGrid) -> Result<TemporalModeSet> {
    let fg = spectral.grid();
    if fg.len().is_multiple_of(2) {
        return Err(precondition("temporal modes need an odd-length frequency grid"));
    }
    let n = grid.len();
    let conj = grid.step() * fg.step() * n as f64 / (2.0 * std::f64::consts::PI);
    if (conj - 1.0).abs() > 1e-9 || n < fg.len() {
        return Err(precondition("time grid is not conjugate to the frequency grid"));
    }
    let fft = FftPlanner::new().plan_fft_forward(n);
    let half_f = (fg.len() - 1) / 2;
    let norm = (2.0 * std::f64::consts::PI).sqrt().recip();
    let mut modes = Vec::with_capacity(spectral.len());
    for (q, f) in spectral.modes().iter().enumerate() {
        let mass: Vec<f64> = f.iter().map(|v| v.norm_sqr()).collect();
        if edge_fraction(&mass) > EDGE_MASS {
            return Err(Error::Resolution(format!("spectral mode {q} reaches the frequency-grid edge")));
        }
        let w = weighted_spectrum(fg, f);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, v) in w.iter().enumerate() {
            let signed = k as isize - half_f as isize;
            buf[signed.rem_euclid(n as isize) as usize] = *v;
        }
        fft.process(&mut buf);
        let out: Vec<Complex64> =
            (0..n).map(|j| buf[grid.signed_index(j).rem_euclid(n as isize) as usize] * norm).collect();
        let tmass: Vec<f64> = out.iter().map(|v| v.norm_sqr()).collect();
        if edge_fraction(&tmass) > EDGE_MASS {
            return Err(Error::Resolution(format!("temporal mode {q} wraps around the time window")));
        }
        modes.push(out);
    }
    Ok(TemporalModeSet { grid: *grid, center: fg.center(), modes })
}

/// Direct evaluation of the envelope at an arbitrary time.
pub fn temporal_mode_at(grid: &FrequencyGrid, f: &[Complex64], t: f64) -> Complex64 {
    let w = weighted_spectrum(grid, f);
    let s: Complex64 = w.iter().enumerate().map(|(k, v)| v * Complex64::from_polar(1.0, -grid.offset(k) * t)).sum();
    s / (2.0 * std::f64::consts::PI).sqrt()
}

/// Temporal modes and time grid shared by the signal and idler.
#[derive(Debug, Clone)]
pub struct TemporalBasis {
    pub signal: TemporalModeSet,
    pub idler: TemporalModeSet,
}

impl TemporalBasis {
    pub fn new(tb: &TwinBeamState, oversample: usize) -> Result<Self> {
        Self::from_basis(tb.basis(), oversample)
    }

    pub fn from_basis(basis: &SchmidtBasis, oversample: usize) -> Result<Self> {
        let grid = TimeGrid::conjugate(basis.signal.grid(), oversample)?;
        Ok(Self { signal: temporal_modes(&basis.signal, &grid)?, idler: temporal_modes(&basis.idler, &grid)? })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.signal.grid
    }
}

/// `I_b(t) = Σ_mlq |f̃_q(t)|² b_mlq`.
pub fn photon_flux(tb: &TwinBeamState, tm: &TemporalModeSet, field: Field) -> Result<Vec<f64>> {
    if field == Field::Pump {
        return Err(precondition("photon flux is defined for signal and idler only"));
    }
    check_modes(tb, tm)?;
    Ok((0..tm.grid.len())
        .map(|j| {
            tb.classes()
                .iter()
                .enumerate()
                .map(|(g, c)| {
                    let row = tb.class_states(g);
                    c.multiplicity
                        * row.iter().enumerate().map(|(q, s)| tm.mode(q)[j].norm_sqr() * s.b_total(field)).sum::<f64>()
                })
                .sum()
        })
        .collect())
}

fn check_modes(tb: &TwinBeamState, tm: &TemporalModeSet) -> Result<()> {
    if tm.len() != tb.basis().spectrum.n_q() {
        return Err(precondition("temporal mode count does not match the triplet table"));
    }
    Ok(())
}

/// Sum-frequency intensity versus delay with its four terms; the total is
/// `baseline + pair + linear - coherent`.
#[derive(Debug, Clone, Serialize)]
pub struct SfgProfile {
    pub tau: Vec<f64>,
    pub total: Vec<f64>,
    /// Product of the delayed signal and idler fluxes.
    pub baseline: Vec<f64>,
    /// Photon-pair interference term.
    pub pair: Vec<f64>,
    /// Term of the linear signal-idler coupling `d̄`.
    pub linear: Vec<f64>,
    /// Coherent-amplitude subtraction (entering with a minus sign).
    pub coherent: Vec<f64>,
}

impl SfgProfile {
    /// Rescales all terms so that `∫ total dτ = 1`.
    pub fn normalized(mut self) -> Self {
        let h = if self.tau.len() > 1 { self.tau[1] - self.tau[0] } else { 1.0 };
        let area: f64 = self.total.iter().sum::<f64>() * h;
        if area > 0.0 {
            for v in [&mut self.total, &mut self.baseline, &mut self.pair, &mut self.linear, &mut self.coherent] {
                v.iter_mut().for_each(|x| *x /= area);
            }
        }
        self
    }
}

/// Delays in units of the time step, `-max_shift ..= max_shift`.
pub fn shift_range(max_shift: usize) -> Vec<isize> {
    (-(max_shift as isize)..=max_shift as isize).collect()
}

/// Evaluates the four terms of the sum-frequency intensity at the delays
/// `shifts · dt`, integrating over the shared time grid.
pub fn sfg_profile(tb: &TwinBeamState, tm: &TemporalBasis, shifts: &[isize]) -> Result<SfgProfile> {
    check_modes(tb, &tm.signal)?;
    check_modes(tb, &tm.idler)?;
    let grid = tm.signal.grid;
    if grid != tm.idler.grid {
        return Err(precondition("signal and idler temporal modes use different grids"));
    }
    let n_t = grid.len() as isize;
    let dt = grid.step();
    struct Coef {
        bs: f64,
        bi: f64,
        d: Complex64,
        dbar2: f64,
        xi4: f64,
    }
    let coefs: Vec<(f64, Vec<Coef>)> = tb
        .classes()
        .iter()
        .enumerate()
        .map(|(g, c)| {
            let row: Vec<Coef> = tb
                .class_states(g)
                .iter()
                .map(|s: &GaussianTripletState| Coef {
                    bs: s.b_total(Field::Signal),
                    bi: s.b_total(Field::Idler),
                    d: s.d_total(Pair::SignalIdler),
                    dbar2: s.dbar_total(Pair::SignalIdler).norm_sqr(),
                    xi4: 2.0 * s.coherent(Field::Signal) * s.coherent(Field::Idler),
                })
                .collect();
            (c.weight, row)
        })
        .collect();
    let terms: Vec<[f64; 4]> = shifts
        .par_iter()
        .map(|&s| {
            let mut acc = [0.0; 4];
            for j in 0..n_t {
                let js = j + s;
                if js < 0 || js >= n_t {
                    continue;
                }
                let (j, js) = (j as usize, js as usize);
                for (w, row) in &coefs {
                    let (mut fs_flux, mut fi_flux, mut pair, mut lin, mut coh) =
                        (0.0, 0.0, Complex64::new(0.0, 0.0), 0.0, 0.0);
                    for (q, k) in row.iter().enumerate() {
                        let a = tm.signal.modes[q][js];
                        let b = tm.idler.modes[q][j];
                        let (na, nb) = (a.norm_sqr(), b.norm_sqr());
                        fs_flux += na * k.bs;
                        fi_flux += nb * k.bi;
                        pair += a * b * k.d;
                        lin += na * nb * k.dbar2;
                        coh += na * nb * k.xi4;
                    }
                    acc[0] += w * fs_flux * fi_flux;
                    acc[1] += w * pair.norm_sqr();
                    acc[2] += w * lin;
                    acc[3] += w * coh;
                }
            }
            acc.map(|v| v * dt)
        })
        .collect();
    let pick = |i: usize| terms.iter().map(|t| t[i]).collect::<Vec<f64>>();
    Ok(SfgProfile {
        tau: shifts.iter().map(|&s| s as f64 * dt).collect(),
        total: terms.iter().map(|t| (t[0] + t[1] + t[2] - t[3]).max(0.0)).collect(),
        baseline: pick(0),
        pair: pick(1),
        linear: pick(2),
        coherent: pick(3),
    })
}

/// `g_qq'(τ) = ∫ f*_i,q(ω) f_s,q'(ω) e^{iωτ} dω`, row-major in `(q, q')`.
pub fn mode_overlap_g(modes_s: &SpectralModeSet, modes_i: &SpectralModeSet, tau: f64) -> Result<Vec<Complex64>> {
    if modes_s.grid() != modes_i.grid() {
        return Err(precondition("signal and idler modes must share a frequency grid"));
    }
    if modes_s.len() != modes_i.len() {
        return Err(precondition("signal and idler mode counts differ"));
    }
    let grid = modes_s.grid();
    let n = modes_s.len();
    let phase: Vec<Complex64> =
        (0..grid.len()).map(|k| Complex64::from_polar(grid.weight(k), grid.point(k) * tau)).collect();
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for q in 0..n {
        let fi = modes_i.mode(q);
        for qp in 0..n {
            let fs = modes_s.mode(qp);
            g[q * n + qp] = (0..grid.len()).map(|k| fi[k].conj() * fs[k] * phase[k]).sum();
        }
    }
    Ok(g)
}

/// Beam-splitter amplitude reflectivity and transmissivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    pub r: Complex64,
    pub t: Complex64,
}

impl BeamSplitter {
    pub fn balanced() -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        Self { r: Complex64::new(a, 0.0), t: Complex64::new(a, 0.0) }
    }

    pub fn new(r: Complex64, t: Complex64) -> Result<Self> {
        if ((r.norm_sqr() + t.norm_sqr()) - 1.0).abs() > 1e-12 {
            return Err(precondition("beam splitter must satisfy |r|² + |t|² = 1"));
        }
        Ok(Self { r, t })
    }
}

/// Normalized coincidence profiles. The three `term_*` vectors are the
/// contributions `-2 Re ρ_term / R₀^Δ` of the coherent, pair and chaotic
/// parts of `ρ^Δ`, so `r_n_delta = 1 + Σ terms`.
#[derive(Debug, Clone, Serialize)]
pub struct HomProfile {
    pub tau: Vec<f64>,
    pub r_n: Vec<f64>,
    pub r_n_delta: Vec<f64>,
    pub term_coherent: Vec<f64>,
    pub term_pair: Vec<f64>,
    pub term_chaotic: Vec<f64>,
    pub r0: f64,
    pub r0_delta: f64,
}

/// `(R₀, R₀^Δ)` for the beam splitter.
pub fn hom_normalization(tb: &TwinBeamState, bs: &BeamSplitter) -> (f64, f64) {
    let rt2 = (bs.r * bs.t).norm_sqr();
    let r4t4 = bs.r.norm_sqr().powi(2) + bs.t.norm_sqr().powi(2);
    let is = tb.sum_over_modes(|s| s.b_total(Field::Signal));
    let ii = tb.sum_over_modes(|s| s.b_total(Field::Idler));
    let r0 = rt2 * (ii * ii + is * is) + r4t4 * ii * is;
    let singles = tb.sum_over_modes(|s| s.variance(Field::Idler) + s.variance(Field::Signal));
    let cross = tb.sum_over_modes(|s| s.covariance(Pair::SignalIdler));
    (r0, rt2 * singles + r4t4 * cross)
}

pub fn hom_profiles(tb: &TwinBeamState, bs: &BeamSplitter, taus: &[f64]) -> Result<HomProfile> {
    let modes_s = &tb.basis().signal;
    let modes_i = &tb.basis().idler;
    let n = modes_s.len();
    if n != tb.basis().spectrum.n_q() {
        return Err(precondition("spectral mode count does not match the triplet table"));
    }
    let rt2 = (bs.r * bs.t).norm_sqr();
    let (r0, r0d) = hom_normalization(tb, bs);
    if !(r0d.abs() > 0.0) {
        return Err(Error::Division("HOM normalization R0^Δ vanishes".into()));
    }
    let rho: Vec<Result<[f64; 3]>> = taus
        .par_iter()
        .map(|&tau| {
            let g = mode_overlap_g(modes_s, modes_i, tau)?;
            let (mut coh, mut pair, mut chaos) = (0.0, Complex64::new(0.0, 0.0), 0.0);
            for (cls, c) in tb.classes().iter().enumerate() {
                let row = tb.class_states(cls);
                let (mut tc, mut tp, mut tx) = (0.0, Complex64::new(0.0, 0.0), 0.0);
                for q in 0..n {
                    let sq = &row[q];
                    tc -= 2.0 * g[q * n + q].norm_sqr() * sq.coherent(Field::Signal) * sq.coherent(Field::Idler);
                    let dq = sq.d_total(Pair::SignalIdler).conj();
                    let bi = sq.b_total(Field::Idler);
                    for qp in 0..n {
                        let sp = &row[qp];
                        tp += g[q * n + qp] * g[qp * n + q].conj() * dq * sp.d_total(Pair::SignalIdler);
                        tx += g[q * n + qp].norm_sqr() * bi * sp.b_total(Field::Signal);
                    }
                }
                coh += c.multiplicity * tc;
                pair += c.multiplicity * tp;
                chaos += c.multiplicity * tx;
            }
            Ok([rt2 * coh, rt2 * pair.re, rt2 * chaos])
        })
        .collect();
    let rho: Vec<[f64; 3]> = rho.into_iter().collect::<Result<_>>()?;
    let total = |r: &[f64; 3]| r[0] + r[1] + r[2];
    Ok(HomProfile {
        tau: taus.to_vec(),
        r_n: rho.iter().map(|r| 1.0 - 2.0 * total(r) / (r0 + r0d)).collect(),
        r_n_delta: rho.iter().map(|r| 1.0 - 2.0 * total(r) / r0d).collect(),
        term_coherent: rho.iter().map(|r| -2.0 * r[0] / r0d).collect(),
        term_pair: rho.iter().map(|r| -2.0 * r[1] / r0d).collect(),
        term_chaotic: rho.iter().map(|r| -2.0 * r[2] / r0d).collect(),
        r0,
        r0_delta: r0d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schmidt::build_spectral_modes;

    fn modes(n: usize) -> SpectralModeSet {
        let sigma = 1e13;
        let g = FrequencyGrid::new(2.7e15, 10.0 * sigma, 161).unwrap();
        build_spectral_modes(&g, sigma, n).unwrap()
    }

    #[test]
    fn gaussian_mode_transforms_to_gaussian() {
        let m = modes(1);
        let grid = TimeGrid::conjugate(m.grid(), 3).unwrap();
        let tm = temporal_modes(&m, &grid).unwrap();
        let sigma = m.width_sigma();
        // |f̃(t)|² ∝ exp(-σ² t²) for |f(ω)|² ∝ exp(-Δ²/σ²)
        let c = grid.half_len();
        let peak = tm.mode(0)[c].norm_sqr();
        for j in [c + 5, c + 11, c - 7] {
            let t = grid.point(j);
            let ratio = tm.mode(0)[j].norm_sqr() / peak;
            assert!((ratio / (-(sigma * t).powi(2)).exp() - 1.0).abs() < 1e-3, "{ratio}");
        }
    }

    #[test]
    fn parseval_and_direct_quadrature() {
        let m = modes(6);
        let grid = TimeGrid::conjugate(m.grid(), 4).unwrap();
        let tm = temporal_modes(&m, &grid).unwrap();
        for q in 0..6 {
            let fw = weighted_spectrum(m.grid(), m.mode(q));
            let spec_norm: f64 = fw.iter().map(|v| v.norm_sqr()).sum::<f64>() / m.grid().step();
            assert!((tm.norm_sqr(q) / spec_norm - 1.0).abs() < 1e-6);
        }
        for j in [0usize, 17, 300, 322, 500, 640] {
            let t = grid.point(j);
            let direct = temporal_mode_at(m.grid(), m.mode(3), t);
            assert!((direct - tm.mode(3)[j]).norm() < 1e-8 * tm.mode(3).iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
    }

    #[test]
    fn non_conjugate_grid_is_rejected() {
        let m = modes(2);
        let grid = TimeGrid::new(1e-15, 801).unwrap();
        assert!(temporal_modes(&m, &grid).is_err());
    }

    #[test]
    fn overlap_at_zero_delay_is_identity() {
        let m = modes(5);
        let g = mode_overlap_g(&m, &m, 0.0).unwrap();
        for q in 0..5 {
            for qp in 0..5 {
                let e = if q == qp { 1.0 } else { 0.0 };
                assert!((g[q * 5 + qp] - e).norm() < 1e-10);
            }
        }
        let far = mode_overlap_g(&m, &m, 3e-12).unwrap();
        assert!(far.iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn beam_splitter_validation() {
        assert!(BeamSplitter::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).is_ok());
        assert!(BeamSplitter::new(Complex64::new(0.6, 0.0), Complex64::new(0.6, 0.0)).is_err());
    }
}
