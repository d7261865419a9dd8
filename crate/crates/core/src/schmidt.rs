//! Parametric Schmidt basis: Hermite–Gaussian spectral modes, the derived
//! pump modes and overlap norms, geometric Schmidt coefficients,
//! Laguerre–Gaussian transverse weights, and the division of the pump power
//! among the mode triplets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{angular_bandwidth, angular_frequency, FWHM_PER_SIGMA, HBAR};
use crate::error::{precondition, Error, Result};
use crate::grid::FrequencyGrid;
use crate::special::{hermite_functions, laguerre, ln_factorial};

/// Orthonormal spectral mode functions sampled on a frequency grid.
#[derive(Debug, Clone)]
pub struct SpectralModeSet {
    grid: FrequencyGrid,
    width_sigma: f64,
    modes: Vec<Vec<Complex64>>,
}

impl SpectralModeSet {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn width_sigma(&self) -> f64 {
        self.width_sigma
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn mode(&self, q: usize) -> &[Complex64] {
        &self.modes[q]
    }

    pub fn modes(&self) -> &[Vec<Complex64>] {
        &self.modes
    }

    /// The same modes reflected about the grid center, `f(2ω⁰ - ω)`. Used
    /// for the idler so that the pair amplitude `Σ λ f_s f_i` is
    /// anticorrelated in frequency, as for a narrowband pump.
    pub fn mirrored(&self) -> Self {
        let modes = self.modes.iter().map(|m| m.iter().rev().copied().collect()).collect();
        Self { grid: self.grid, width_sigma: self.width_sigma, modes }
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, fa) in self.modes.iter().enumerate() {
            for (b, fb) in self.modes.iter().enumerate() {
                let g = self.grid.inner(fa, fb);
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

/// Hermite–Gaussian modes `f_q(ω) = ψ_q((ω - ω_c)/σ) / √σ` centered on the grid.
pub fn build_spectral_modes(grid: &FrequencyGrid, sigma: f64, count: usize) -> Result<SpectralModeSet> {
    if count == 0 {
        return Err(precondition("spectral mode count must be at least 1"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(precondition(format!("mode width must be positive, got {sigma}")));
    }
    if grid.step() > 0.25 * sigma {
        return Err(Error::Resolution(format!(
            "grid step {:.3e} exceeds a quarter of the mode width {:.3e}",
            grid.step(),
            sigma
        )));
    }
    let norm = sigma.sqrt().recip();
    let mut modes = vec![Vec::with_capacity(grid.len()); count];
    for k in 0..grid.len() {
        let psi = hermite_functions(count, grid.offset(k) / sigma);
        for (q, v) in psi.into_iter().enumerate() {
            modes[q].push(Complex64::new(v * norm, 0.0));
        }
    }
    let set = SpectralModeSet { grid: *grid, width_sigma: sigma, modes };
    for (q, m) in set.modes.iter().enumerate() {
        let n = grid.norm_sqr(m);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Resolution(format!(
                "mode {q} has grid norm {n:.12}; the grid does not cover its support"
            )));
        }
    }
    Ok(set)
}

/// Non-normalized pump modes and their norms `κ_q`.
#[derive(Debug, Clone)]
pub struct PumpModeSet {
    grid: FrequencyGrid,
    modes: Vec<Vec<Complex64>>,
    kappa: Vec<f64>,
}

impl PumpModeSet {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn mode(&self, q: usize) -> &[Complex64] {
        &self.modes[q]
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa.iter().copied().fold(0.0, f64::max)
    }
}

/// Pump modes `f_p,q(ω_p) = ∫ dω_s f_s,q(ω_s) f_i,q(ω_p - ω_s)` by discrete
/// convolution. The three grids must share one step.
pub fn build_pump_modes(
    signal: &SpectralModeSet,
    idler: &SpectralModeSet,
    pump_grid: &FrequencyGrid,
) -> Result<PumpModeSet> {
    if signal.len() != idler.len() {
        return Err(precondition(format!("signal and idler mode counts differ ({} vs {})", signal.len(), idler.len())));
    }
    let (gs, gi) = (signal.grid(), idler.grid());
    let h = gs.step();
    for (name, g) in [("idler", gi), ("pump", pump_grid)] {
        if ((g.step() - h) / h).abs() > 1e-9 {
            return Err(precondition(format!(
                "{name} grid step {:.6e} differs from signal grid step {h:.6e}",
                g.step()
            )));
        }
    }
    // The full convolution lives on a grid starting at ω_s,0 + ω_i,0.
    let full_start = gs.point(0) + gi.point(0);
    let full_len = gs.len() + gi.len() - 1;
    let shift = (pump_grid.point(0) - full_start) / h;
    let offset = shift.round();
    if (shift - offset).abs() > 1e-6 {
        return Err(precondition("pump grid is not aligned with the signal/idler grids"));
    }
    let offset = offset as isize;

    let mut modes = Vec::with_capacity(signal.len());
    let mut kappa = Vec::with_capacity(signal.len());
    for q in 0..signal.len() {
        let (fs, fi) = (signal.mode(q), idler.mode(q));
        let mut full = vec![Complex64::new(0.0, 0.0); full_len];
        for (j, a) in fs.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (k, b) in fi.iter().enumerate() {
                full[j + k] += a * b;
            }
        }
        for v in full.iter_mut() {
            *v *= h;
        }
        let total: f64 = full.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
        let cropped: Vec<Complex64> = (0..pump_grid.len())
            .map(|n| {
                let idx = n as isize + offset;
                if idx >= 0 && (idx as usize) < full_len {
                    full[idx as usize]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let kept: f64 = cropped.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
        if total > 0.0 && (total - kept) / total > 1e-6 {
            return Err(Error::Truncation(format!(
                "pump grid loses a fraction {:.3e} of pump mode {q}",
                (total - kept) / total
            )));
        }
        let norm = pump_grid.norm_sqr(&cropped).sqrt();
        modes.push(cropped);
        kappa.push(norm);
    }
    Ok(PumpModeSet { grid: *pump_grid, modes, kappa })
}

/// Geometric Schmidt coefficients for the spectral index `q` and the
/// transverse pair `(m, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    lambda_spectral: Vec<f64>,
    lambda_transverse: Vec<f64>,
    m_max: i32,
    n_l: usize,
    mu_spectral: f64,
    mu_transverse: f64,
    degeneracy: u64,
}

impl SchmidtSpectrum {
    pub fn lambda_spectral(&self) -> &[f64] {
        &self.lambda_spectral
    }

    /// Transverse coefficient of the `(m, l)` group (unit sum of squares
    /// over all groups).
    pub fn lambda_transverse(&self, m: i32, l: usize) -> f64 {
        self.lambda_transverse[self.transverse_index(m, l)]
    }

    pub fn transverse_table(&self) -> &[f64] {
        &self.lambda_transverse
    }

    pub fn transverse_index(&self, m: i32, l: usize) -> usize {
        debug_assert!(m.abs() <= self.m_max && l < self.n_l);
        (m + self.m_max) as usize * self.n_l + l
    }

    /// `(m, l)` pairs in table order.
    pub fn transverse_pairs(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        (-self.m_max..=self.m_max).flat_map(move |m| (0..self.n_l).map(move |l| (m, l)))
    }

    pub fn m_max(&self) -> i32 {
        self.m_max
    }

    pub fn n_l(&self) -> usize {
        self.n_l
    }

    pub fn n_q(&self) -> usize {
        self.lambda_spectral.len()
    }

    pub fn mu_spectral(&self) -> f64 {
        self.mu_spectral
    }

    pub fn mu_transverse(&self) -> f64 {
        self.mu_transverse
    }

    /// Number of physical transverse modes sharing each `(m, l)` coefficient.
    pub fn degeneracy(&self) -> u64 {
        self.degeneracy
    }

    pub fn with_degeneracy(mut self, degeneracy: u64) -> Result<Self> {
        if degeneracy == 0 {
            return Err(precondition("transverse degeneracy must be at least 1"));
        }
        self.degeneracy = degeneracy;
        Ok(self)
    }

    /// Coefficient of one physical transverse mode of group `(m, l)`.
    pub fn lambda_transverse_mode(&self, m: i32, l: usize) -> f64 {
        self.lambda_transverse(m, l) / (self.degeneracy as f64).sqrt()
    }

    /// `(Σλ²)² / Σλ⁴` of the spectral coefficients.
    pub fn spectral_mode_count(&self) -> f64 {
        schmidt_number(&self.lambda_spectral)
    }

    /// Schmidt number of the full spectral × transverse product basis.
    pub fn total_mode_count(&self) -> f64 {
        let t = schmidt_number(&self.lambda_transverse) * self.degeneracy as f64;
        t * self.spectral_mode_count()
    }
}

fn schmidt_number(lambda: &[f64]) -> f64 {
    let s2: f64 = lambda.iter().map(|l| l * l).sum();
    let s4: f64 = lambda.iter().map(|l| l.powi(4)).sum();
    s2 * s2 / s4
}

fn geometric(mu: f64, exponents: impl Iterator<Item = usize>) -> Vec<f64> {
    let raw: Vec<f64> = exponents.map(|e| if e == 0 { 1.0 } else { mu.powi(e as i32) }).collect();
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    raw.into_iter().map(|v| v / norm).collect()
}

/// `λ_q ∝ μ_∥^q` and `λ_ml ∝ μ_⊥^{|m|+l}`, each renormalized to unit sum
/// of squares over the truncated index set; `m` runs over
/// `-(n_m-1)/2 ..= (n_m-1)/2`.
pub fn build_schmidt_spectrum(
    mu_spectral: f64,
    mu_transverse: f64,
    n_q: usize,
    n_m: usize,
    n_l: usize,
) -> Result<SchmidtSpectrum> {
    for (name, mu) in [("mu_spectral", mu_spectral), ("mu_transverse", mu_transverse)] {
        if !(0.0..1.0).contains(&mu) {
            return Err(precondition(format!("{name} must lie in [0, 1), got {mu}")));
        }
    }
    if n_q == 0 || n_l == 0 || n_m == 0 {
        return Err(precondition("mode counts must be positive"));
    }
    if n_m.is_multiple_of(2) {
        return Err(precondition(format!("n_m must be odd (m symmetric about 0), got {n_m}")));
    }
    let m_max = ((n_m - 1) / 2) as i32;
    let lambda_spectral = geometric(mu_spectral, 0..n_q);
    let lambda_transverse =
        geometric(mu_transverse, (-m_max..=m_max).flat_map(|m| (0..n_l).map(move |l| m.unsigned_abs() as usize + l)));
    Ok(SchmidtSpectrum { lambda_spectral, lambda_transverse, m_max, n_l, mu_spectral, mu_transverse, degeneracy: 1 })
}

/// Nonlinear overlap weights of the transverse modes.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseWeights {
    m_max: i32,
    n_l: usize,
    w: Vec<f64>,
}

impl TransverseWeights {
    pub fn get(&self, m: i32, l: usize) -> f64 {
        self.w[(m + self.m_max) as usize * self.n_l + l]
    }

    pub fn table(&self) -> &[f64] {
        &self.w
    }
}

/// `|t_ml(r)|²` of a normalized Laguerre–Gaussian mode of radius `radius`.
pub fn laguerre_gauss_intensity(m: i32, l: usize, radius: f64, r: f64) -> f64 {
    let am = m.unsigned_abs() as usize;
    let u = 2.0 * r * r / (radius * radius);
    let ln_c = std::f64::consts::LN_2 + ln_factorial(l) - std::f64::consts::PI.ln() - ln_factorial(l + am);
    let lag = laguerre(l, am as f64, u);
    let base = if am == 0 { 1.0 } else { u.powi(am as i32) };
    (ln_c.exp() / (radius * radius)) * base * lag * lag * (-u).exp()
}

/// `w_ml = ∫∫ r dr dφ |t_s,ml t_i,ml|²` with identical Laguerre–Gaussian
/// signal and idler modes of radius `beam_radius`.
pub fn transverse_weights(n_m: usize, n_l: usize, beam_radius: f64) -> Result<TransverseWeights> {
    if !(beam_radius > 0.0 && beam_radius.is_finite()) {
        return Err(precondition(format!("beam radius must be positive, got {beam_radius}")));
    }
    if n_m.is_multiple_of(2) || n_m == 0 || n_l == 0 {
        return Err(precondition("n_m must be odd and n_l positive"));
    }
    let m_max = ((n_m - 1) / 2) as i32;
    let mut w = Vec::with_capacity(n_m * n_l);
    for m in -m_max..=m_max {
        for l in 0..n_l {
            w.push(overlap_weight(m, l, beam_radius)?);
        }
    }
    Ok(TransverseWeights { m_max, n_l, w })
}

/// In `u = 2r²/w²`: `w_ml = (π C²/(2w²)) ∫ u^{2|m|} L⁴ e^{-2u} du` with
/// `C = 2 l!/(π (l+|m|)!)`, by composite Simpson with step halving.
fn overlap_weight(m: i32, l: usize, radius: f64) -> Result<f64> {
    let am = m.unsigned_abs() as usize;
    let ln_c = std::f64::consts::LN_2 + ln_factorial(l) - std::f64::consts::PI.ln() - ln_factorial(l + am);
    let integrand = |u: f64| {
        let lag = laguerre(l, am as f64, u);
        let p = if am == 0 { 1.0 } else { u.powi(2 * am as i32) };
        p * lag.powi(4) * (-2.0 * u).exp()
    };
    let upper = 40.0 + 4.0 * (am + 2 * l) as f64;
    let simpson = |n: usize| {
        let h = upper / n as f64;
        let mut s = integrand(0.0) + integrand(upper);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * integrand(k as f64 * h);
        }
        s * h / 3.0
    };
    let mut n = 256;
    let mut prev = simpson(n);
    loop {
        n *= 2;
        let cur = simpson(n);
        if (cur - prev).abs() <= 1e-11 * cur.abs().max(f64::MIN_POSITIVE) {
            let c2 = (2.0 * ln_c).exp();
            return Ok(std::f64::consts::PI * c2 / (2.0 * radius * radius) * cur);
        }
        if n > 1 << 22 {
            return Err(Error::Resolution(format!("overlap quadrature for (m={m}, l={l}) did not converge")));
        }
        prev = cur;
    }
}

/// Pump pulse and crystal parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpConfig {
    /// Mean pump power, W.
    pub power: f64,
    /// Pulse repetition rate, 1/s.
    pub repetition_rate: f64,
    /// Central vacuum wavelength, m.
    pub central_wavelength: f64,
    /// Spectral FWHM in wavelength, m.
    pub spectral_fwhm: f64,
    /// Transverse beam radius, m.
    pub beam_radius: f64,
    /// Crystal length, m.
    pub crystal_length: f64,
    /// Parametric gain of the dominant triplet per √W of pump power.
    pub coupling_scale: f64,
}

impl Default for PumpConfig {
    fn default() -> Self {
        Self {
            power: 0.17,
            repetition_rate: 400.0,
            central_wavelength: 349e-9,
            spectral_fwhm: 1e-9,
            beam_radius: 500e-6,
            crystal_length: 4e-3,
            coupling_scale: 23.29,
        }
    }
}

impl PumpConfig {
    pub fn pump_angular_frequency(&self) -> f64 {
        angular_frequency(self.central_wavelength)
    }

    /// Intensity FWHM of the pump spectrum, rad/s.
    pub fn pump_bandwidth(&self) -> f64 {
        angular_bandwidth(self.central_wavelength, self.spectral_fwhm)
    }

    /// Width σ of the fundamental signal/idler mode whose pump mode has the
    /// configured intensity FWHM (`|f_p,0|² ∝ exp(-Δ²/2σ²)`).
    pub fn mode_sigma(&self) -> f64 {
        self.pump_bandwidth() / FWHM_PER_SIGMA
    }

    /// Pump photons per pulse `P/(f ħ ω_p)`.
    pub fn photons_per_pulse(&self, power: f64) -> f64 {
        power / (self.repetition_rate * HBAR * self.pump_angular_frequency())
    }
}

/// Initial pump amplitudes of every triplet.
#[derive(Debug, Clone)]
pub struct PowerDivision {
    /// `A^N` per physical mode, indexed `[transverse_index][q]`.
    normal: Vec<Vec<f64>>,
    multiplicity: u64,
    xi_p: f64,
    kappa_tilde: f64,
}

impl PowerDivision {
    pub fn normal_amplitude(&self, transverse: usize, q: usize) -> f64 {
        self.normal[transverse][q]
    }

    /// Symmetric-ordering amplitude `√((A^N)² + 1/2)`.
    pub fn symmetric_amplitude(&self, transverse: usize, q: usize) -> f64 {
        (self.normal[transverse][q].powi(2) + 0.5).sqrt()
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.normal
    }

    /// Physical modes represented by each table entry.
    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn xi_p(&self) -> f64 {
        self.xi_p
    }

    pub fn kappa_tilde(&self) -> f64 {
        self.kappa_tilde
    }

    /// `Σ (A^N)²` over all physical modes.
    pub fn total_photons(&self) -> f64 {
        let s: f64 = self.normal.iter().flatten().map(|a| a * a).sum();
        s * self.multiplicity as f64
    }
}

/// `A^N_mlq(0) = κ̃ (λ_ml λ_q / κ_q) ξ_p` with `κ̃ = (Σ_q λ_q²/κ_q²)^{-1/2}`
/// and `ξ_p = √(P/(f ħ ω_p))`.
pub fn pump_power_division(cfg: &PumpConfig, spectrum: &SchmidtSpectrum, pump: &PumpModeSet) -> Result<PowerDivision> {
    if pump.len() != spectrum.n_q() {
        return Err(precondition("pump mode count does not match the spectral Schmidt count"));
    }
    if let Some(q) = pump.kappa().iter().position(|k| !(*k > 0.0)) {
        return Err(Error::Division(format!("pump-mode norm κ_{q} is zero")));
    }
    let xi_p = cfg.photons_per_pulse(cfg.power).sqrt();
    let ls = spectrum.lambda_spectral();
    let s: f64 = ls.iter().zip(pump.kappa()).map(|(l, k)| (l / k).powi(2)).sum();
    let kappa_tilde = s.sqrt().recip();
    let normal = spectrum
        .transverse_pairs()
        .map(|(m, l)| {
            let lt = spectrum.lambda_transverse_mode(m, l);
            ls.iter().zip(pump.kappa()).map(|(lq, kq)| kappa_tilde * lt * lq / kq * xi_p).collect()
        })
        .collect();
    Ok(PowerDivision { normal, multiplicity: spectrum.degeneracy(), xi_p, kappa_tilde })
}

/// Shape parameters of the Schmidt basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchmidtConfig {
    pub mu_spectral: f64,
    pub mu_transverse: f64,
    pub n_q: usize,
    pub n_m: usize,
    pub n_l: usize,
    /// Physical transverse modes per `(m, l)` coefficient.
    pub transverse_degeneracy: u64,
}

impl Default for SchmidtConfig {
    fn default() -> Self {
        Self { mu_spectral: 0.97, mu_transverse: 0.8, n_q: 20, n_m: 11, n_l: 5, transverse_degeneracy: 7_000 }
    }
}

/// Sampling of the signal frequency grid, in units of the mode width σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrequencyGridConfig {
    pub n_points: usize,
    pub half_span_sigmas: f64,
}

impl Default for FrequencyGridConfig {
    fn default() -> Self {
        Self { n_points: 161, half_span_sigmas: 10.0 }
    }
}

/// Everything derived from the basis configuration that does not depend on
/// the pump power.
#[derive(Debug, Clone)]
pub struct SchmidtBasis {
    pub pump: PumpConfig,
    pub signal: SpectralModeSet,
    pub idler: SpectralModeSet,
    pub pump_modes: PumpModeSet,
    pub spectrum: SchmidtSpectrum,
    pub weights: TransverseWeights,
    /// `K_q L` per spectral index, in 1/√photon.
    coupling_length: Vec<f64>,
    dominant: (usize, usize),
}

impl SchmidtBasis {
    pub fn new(pump: &PumpConfig, schmidt: &SchmidtConfig, grid: &FrequencyGridConfig) -> Result<Self> {
        let sigma = pump.mode_sigma();
        let omega_p = pump.pump_angular_frequency();
        let half = grid.half_span_sigmas * sigma;
        let gs = FrequencyGrid::new(0.5 * omega_p, half, grid.n_points)?;
        let signal = build_spectral_modes(&gs, sigma, schmidt.n_q)?;
        let idler = signal.mirrored();
        let gp = gs.widened(omega_p, 2)?;
        let pump_modes = build_pump_modes(&signal, &idler, &gp)?;
        let spectrum =
            build_schmidt_spectrum(schmidt.mu_spectral, schmidt.mu_transverse, schmidt.n_q, schmidt.n_m, schmidt.n_l)?
                .with_degeneracy(schmidt.transverse_degeneracy)?;
        let weights = transverse_weights(schmidt.n_m, schmidt.n_l, pump.beam_radius)?;

        // Dominant triplet: largest initial pump amplitude.
        let probe = pump_power_division(&PumpConfig { power: 1.0, ..*pump }, &spectrum, &pump_modes)?;
        let mut dominant = (0, 0);
        let mut best = f64::NEG_INFINITY;
        for (t, row) in probe.table().iter().enumerate() {
            for (q, a) in row.iter().enumerate() {
                if *a > best {
                    best = *a;
                    dominant = (t, q);
                }
            }
        }
        // Gain of the dominant triplet, K_d L A^N_d, equals coupling_scale·√P;
        // other couplings scale with their overlap norm κ_q.
        let kd_l = pump.coupling_scale / best;
        let kappa = pump_modes.kappa();
        let coupling_length = kappa.iter().map(|k| kd_l * k / kappa[dominant.1]).collect();
        Ok(Self { pump: *pump, signal, idler, pump_modes, spectrum, weights, coupling_length, dominant })
    }

    /// `K_q L`, 1/√photon.
    pub fn coupling_length(&self, q: usize) -> f64 {
        self.coupling_length[q]
    }

    /// Coupling constant `K_q`, 1/(m √photon).
    pub fn coupling(&self, q: usize) -> f64 {
        self.coupling_length[q] / self.pump.crystal_length
    }

    /// `(transverse_index, q)` of the triplet with the largest initial pump amplitude.
    pub fn dominant(&self) -> (usize, usize) {
        self.dominant
    }

    pub fn power_division(&self, power: f64) -> Result<PowerDivision> {
        pump_power_division(&PumpConfig { power, ..self.pump }, &self.spectrum, &self.pump_modes)
    }

    /// Photon share `(A^N_d)² / ξ_p²` of one dominant physical mode.
    pub fn dominant_share(&self) -> Result<f64> {
        let div = self.power_division(1.0)?;
        let (t, q) = self.dominant;
        Ok((div.normal_amplitude(t, q) / div.xi_p()).powi(2))
    }
}
