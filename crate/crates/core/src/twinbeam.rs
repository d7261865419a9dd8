//! Whole-beam observables assembled from the independent triplets.
//!
//! Triplet states depend on `(m, l)` only through `λ_ml`, so triplets are
//! evolved once per distinct transverse coefficient and the results are
//! weighted by the number of physical modes sharing it. All reductions run
//! in a fixed order.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::TripletParams;
use crate::error::{precondition, Result};
use crate::grid::{fwhm, FrequencyGrid};
use crate::schmidt::{PowerDivision, SchmidtBasis, SpectralModeSet};
use crate::statistics::{evolve_state, ratio, Field, GaussianTripletState, Pair};

/// Transverse modes sharing one Schmidt coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseClass {
    /// Per-physical-mode coefficient.
    pub lambda: f64,
    /// `(m, l)` groups in the class.
    pub members: Vec<(i32, usize)>,
    /// Physical modes in the class.
    pub multiplicity: f64,
    /// Sum of the nonlinear overlap weights `w_ml` over the physical modes.
    pub weight: f64,
    /// Table index of the first member, used for amplitude look-up.
    representative: usize,
}

pub fn transverse_classes(basis: &SchmidtBasis) -> Vec<TransverseClass> {
    let sp = &basis.spectrum;
    let d = sp.degeneracy() as f64;
    let mut classes: Vec<TransverseClass> = Vec::new();
    for (m, l) in sp.transverse_pairs() {
        let lambda = sp.lambda_transverse_mode(m, l);
        let w = basis.weights.get(m, l) * d;
        match classes.iter_mut().find(|c| c.lambda.to_bits() == lambda.to_bits()) {
            Some(c) => {
                c.members.push((m, l));
                c.multiplicity += d;
                c.weight += w;
            }
            None => classes.push(TransverseClass {
                lambda,
                members: vec![(m, l)],
                multiplicity: d,
                weight: w,
                representative: sp.transverse_index(m, l),
            }),
        }
    }
    classes
}

/// Output state of all triplets at the crystal end for one pump power.
#[derive(Debug, Clone)]
pub struct TwinBeamState<'a> {
    basis: &'a SchmidtBasis,
    power: f64,
    gamma: f64,
    classes: Vec<TransverseClass>,
    /// `[class][q]`.
    states: Vec<Vec<GaussianTripletState>>,
    /// Initial pump amplitude per physical mode, `[class][q]`.
    input: Vec<Vec<f64>>,
}

impl<'a> TwinBeamState<'a> {
    pub fn new(basis: &'a SchmidtBasis, power: f64, gamma: f64) -> Result<Self> {
        if !(power >= 0.0 && power.is_finite()) {
            return Err(precondition(format!("pump power must be non-negative, got {power}")));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(precondition(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        let division: PowerDivision = basis.power_division(power)?;
        let classes = transverse_classes(basis);
        let n_q = basis.spectrum.n_q();
        let length = basis.pump.crystal_length;
        let input: Vec<Vec<f64>> = classes
            .iter()
            .map(|c| (0..n_q).map(|q| division.normal_amplitude(c.representative, q)).collect())
            .collect();
        let cells: Vec<(usize, usize)> = (0..classes.len()).flat_map(|g| (0..n_q).map(move |q| (g, q))).collect();
        let flat: Vec<GaussianTripletState> = cells
            .par_iter()
            .map(|&(g, q)| {
                let a = input[g][q];
                let p = TripletParams::vacuum_seeded(basis.coupling(q), a * a, gamma, length)?;
                evolve_state(&p, length, a)
            })
            .collect::<Result<_>>()?;
        let states = flat.chunks(n_q).map(|c| c.to_vec()).collect();
        Ok(Self { basis, power, gamma, classes, states, input })
    }

    pub fn basis(&self) -> &SchmidtBasis {
        self.basis
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn classes(&self) -> &[TransverseClass] {
        &self.classes
    }

    pub fn class_states(&self, class: usize) -> &[GaussianTripletState] {
        &self.states[class]
    }

    /// State of triplet `(m, l, q)`.
    pub fn triplet(&self, m: i32, l: usize, q: usize) -> Option<&GaussianTripletState> {
        let g = self.classes.iter().position(|c| c.members.contains(&(m, l)))?;
        self.states[g].get(q)
    }

    /// Initial pump amplitude of one physical mode of class `class`.
    pub fn input_amplitude(&self, class: usize, q: usize) -> f64 {
        self.input[class][q]
    }

    /// The class and index of the strongest triplet.
    pub fn dominant(&self) -> (usize, usize) {
        let (t, q) = self.basis.dominant();
        let g = self
            .classes
            .iter()
            .position(|c| {
                c.representative == t || c.members.iter().any(|&(m, l)| self.basis.spectrum.transverse_index(m, l) == t)
            })
            .unwrap_or(0);
        (g, q)
    }

    pub fn dominant_state(&self) -> &GaussianTripletState {
        let (g, q) = self.dominant();
        &self.states[g][q]
    }

    /// `Σ_mlq x(state)` over all physical modes, in fixed order.
    pub fn sum_over_modes(&self, x: impl Fn(&GaussianTripletState) -> f64) -> f64 {
        self.classes.iter().zip(&self.states).map(|(c, row)| c.multiplicity * row.iter().map(&x).sum::<f64>()).sum()
    }

    /// Incident pump photons per pulse.
    pub fn input_pump_photons(&self) -> f64 {
        self.classes
            .iter()
            .zip(&self.input)
            .map(|(c, row)| c.multiplicity * row.iter().map(|a| a * a).sum::<f64>())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSummary {
    pub mean: f64,
    pub coherent: f64,
    pub chaotic: f64,
    pub variance: f64,
    /// `⟨I²⟩/⟨I⟩²` with normally ordered moments.
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamSummary {
    pub power: f64,
    pub gamma: f64,
    /// Indexed by [`Field`].
    pub fields: [FieldSummary; 3],
    /// Indexed by [`Pair`].
    pub covariance: [f64; 3],
    pub r_pair: [Option<f64>; 3],
    pub r_si: Option<f64>,
    /// `⟨I_s⟩² / ⟨ΔI_s²⟩`.
    pub mode_count_intensity: Option<f64>,
    /// Schmidt number of the mean pair amplitudes.
    pub mode_count_pairs: Option<f64>,
    /// Signal photons out per pump photon in.
    pub conversion_efficiency: Option<f64>,
}

impl BeamSummary {
    pub fn field(&self, f: Field) -> &FieldSummary {
        &self.fields[f.index()]
    }
}

pub fn mode_counts(tb: &TwinBeamState) -> (Option<f64>, Option<f64>) {
    let mean = tb.sum_over_modes(|s| s.intensity(Field::Signal));
    let var = tb.sum_over_modes(|s| s.variance(Field::Signal));
    let d2 = tb.sum_over_modes(|s| s.d_total(Pair::SignalIdler).norm_sqr());
    let d4 = tb.sum_over_modes(|s| s.d_total(Pair::SignalIdler).norm_sqr().powi(2));
    (ratio(mean * mean, var), ratio(d2 * d2, d4))
}

pub fn aggregate_summary(tb: &TwinBeamState) -> BeamSummary {
    let fields = Field::ALL.map(|f| {
        let coherent = tb.sum_over_modes(|s| s.coherent(f));
        let chaotic = tb.sum_over_modes(|s| s.chaotic(f));
        let mean = tb.sum_over_modes(|s| s.intensity(f));
        let variance = tb.sum_over_modes(|s| s.variance(f));
        FieldSummary { mean, coherent, chaotic, variance, r: ratio(variance, mean * mean).map(|x| 1.0 + x) }
    });
    let covariance = Pair::ALL.map(|p| tb.sum_over_modes(|s| s.covariance(p)));
    let r_pair = Pair::ALL.map(|p| {
        let (j, k) = p.fields();
        ratio(covariance[p.index()], fields[j.index()].mean * fields[k.index()].mean)
    });
    let (s, i) = (&fields[0], &fields[1]);
    let diff = tb.sum_over_modes(|st| st.difference_variance());
    let r_si = ratio(diff, s.mean + i.mean).map(|x| 1.0 + x);
    let (kn, k) = mode_counts(tb);
    BeamSummary {
        power: tb.power,
        gamma: tb.gamma,
        fields,
        covariance,
        r_pair,
        r_si,
        mode_count_intensity: kn,
        mode_count_pairs: k,
        conversion_efficiency: ratio(s.mean, tb.input_pump_photons()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CorrelationKind {
    Auto(Field),
    Cross,
}

/// Intensity-fluctuation correlation on a pair of frequency grids, stored
/// row-major with the first argument as the row.
#[derive(Debug, Clone)]
pub struct SpectralCorrelation {
    pub kind: CorrelationKind,
    pub grid_a: FrequencyGrid,
    pub grid_b: FrequencyGrid,
    pub values: Vec<f64>,
}

impl SpectralCorrelation {
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.grid_b.len() + b]
    }

    /// Section through the center of the second argument, as a function of
    /// the first: `A(ω, ω⁰)` or `C(ω_s, ω_i⁰)`.
    pub fn central_section(&self) -> Vec<f64> {
        let c = (self.grid_b.len() - 1) / 2;
        (0..self.grid_a.len()).map(|a| self.value(a, c)).collect()
    }

    /// FWHM of the central section about its global maximum, rad/s.
    pub fn central_fwhm(&self) -> Option<f64> {
        fwhm(&self.grid_a.points(), &self.central_section())
    }

    /// Whether the center of the central section is a local minimum.
    pub fn central_is_dip(&self) -> bool {
        let s = self.central_section();
        let c = (s.len() - 1) / 2;
        s[c] < s[c - 1] && s[c] < s[c + 1]
    }
}

fn field_modes<'b>(tb: &'b TwinBeamState, f: Field) -> Result<&'b SpectralModeSet> {
    match f {
        Field::Signal => Ok(&tb.basis.signal),
        Field::Idler => Ok(&tb.basis.idler),
        Field::Pump => Err(precondition("spectral correlations are defined for signal and idler only")),
    }
}

pub fn spectral_correlations(tb: &TwinBeamState, kind: CorrelationKind) -> Result<SpectralCorrelation> {
    let (ma, mb) = match kind {
        CorrelationKind::Auto(f) => {
            let m = field_modes(tb, f)?;
            (m, m)
        }
        CorrelationKind::Cross => (&tb.basis.signal, &tb.basis.idler),
    };
    let (na, nb) = (ma.grid().len(), mb.grid().len());
    let n_q = tb.basis.spectrum.n_q();
    if ma.len() != n_q || mb.len() != n_q {
        return Err(crate::Error::Config(vec!["spectral mode sets do not match the triplet table".into()]));
    }
    // Per class and q: (coherent amplitude, incoherent magnitude², subtraction).
    struct Coef {
        amp: Complex64,
        second: f64,
        third: f64,
    }
    let coefs: Vec<(f64, Vec<Coef>)> = tb
        .classes
        .iter()
        .zip(&tb.states)
        .map(|(c, row)| {
            let cs = row
                .iter()
                .map(|s| match kind {
                    CorrelationKind::Auto(f) => Coef {
                        amp: Complex64::new(s.b_total(f), 0.0),
                        second: s.c_total(f).norm_sqr(),
                        third: 2.0 * s.coherent(f).powi(2),
                    },
                    CorrelationKind::Cross => Coef {
                        amp: s.d_total(Pair::SignalIdler),
                        second: s.dbar_total(Pair::SignalIdler).norm_sqr(),
                        third: 2.0 * s.coherent(Field::Signal) * s.coherent(Field::Idler),
                    },
                })
                .collect();
            (c.multiplicity, cs)
        })
        .collect();
    let auto = matches!(kind, CorrelationKind::Auto(_));
    let values: Vec<f64> = (0..na)
        .into_par_iter()
        .flat_map_iter(|a| {
            let coefs = &coefs;
            (0..nb).map(move |b| {
                let mut total = 0.0;
                for (mult, cs) in coefs {
                    let mut coherent = Complex64::new(0.0, 0.0);
                    let mut rest = 0.0;
                    for (q, k) in cs.iter().enumerate() {
                        let fa = ma.mode(q)[a];
                        let fb = mb.mode(q)[b];
                        let first = if auto { fa.conj() * fb } else { fa * fb };
                        coherent += first * k.amp;
                        rest += (fa * fb).norm_sqr() * (k.second - k.third);
                    }
                    total += mult * (coherent.norm_sqr() + rest);
                }
                total
            })
        })
        .collect();
    Ok(SpectralCorrelation { kind, grid_a: *ma.grid(), grid_b: *mb.grid(), values })
}

/// Pump spectrum transferred into the down-converted fields,
/// `Σ_ml |Σ_q f_p,q(ω_p) d_si,mlq|²` on the pump grid. With `normalize`
/// the profile satisfies `∫ dω_p I(ω_p)/ω_p⁰ = 1`.
pub fn pump_transferred_spectrum(tb: &TwinBeamState, normalize: bool) -> Vec<f64> {
    let pm = &tb.basis.pump_modes;
    let grid = pm.grid();
    let mut out: Vec<f64> = (0..grid.len())
        .map(|k| {
            tb.classes
                .iter()
                .zip(&tb.states)
                .map(|(c, row)| {
                    let s: Complex64 =
                        row.iter().enumerate().map(|(q, st)| pm.mode(q)[k] * st.d_total(Pair::SignalIdler)).sum();
                    c.multiplicity * s.norm_sqr()
                })
                .sum()
        })
        .collect();
    if normalize {
        let area = grid.integrate(&out) / grid.center();
        if area > 0.0 {
            out.iter_mut().for_each(|v| *v /= area);
        }
    }
    out
}

/// Incident pump intensity spectrum with the configured FWHM, normalized
/// like [`pump_transferred_spectrum`].
pub fn incident_pump_spectrum(basis: &SchmidtBasis) -> Vec<f64> {
    let grid = basis.pump_modes.grid();
    let s = basis.pump.pump_bandwidth() / crate::constants::FWHM_PER_SIGMA;
    let raw: Vec<f64> = (0..grid.len()).map(|k| (-0.5 * (grid.offset(k) / s).powi(2)).exp()).collect();
    let area = grid.integrate(&raw) / grid.center();
    raw.into_iter().map(|v| v / area).collect()
}
