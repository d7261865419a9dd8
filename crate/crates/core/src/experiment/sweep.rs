//! Pump-power sweeps. Each `(γ, P)` cell is an independent job; results
//! are collected in sweep order so the output does not depend on the
//! number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::features::{hom_features, hom_visibility, sfg_features, Polarity};
use crate::grid::fwhm;
use crate::interference::{hom_profiles, photon_flux, sfg_profile, shift_range, BeamSplitter, TemporalBasis};
use crate::schmidt::SchmidtBasis;
use crate::statistics::{Field, Pair, TripletObservables};
use crate::twinbeam::{aggregate_summary, spectral_correlations, BeamSummary, CorrelationKind, TwinBeamState};

use super::config::RunConfig;
use super::output::{Cell, Provenance, Table};

/// Which parts of a cell to evaluate beyond the triplet and beam summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stages {
    pub spectral: bool,
    pub sfg: bool,
    pub hom: bool,
}

impl Stages {
    pub const ALL: Stages = Stages { spectral: true, sfg: true, hom: true };
    pub const SUMMARY: Stages = Stages { spectral: false, sfg: false, hom: false };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralScalars {
    /// FWHM of `A_s(ω_s, ω_s⁰)`, rad/s.
    pub auto_fwhm: Option<f64>,
    /// FWHM of `C(ω_s, ω_i⁰)`, rad/s.
    pub cross_fwhm: Option<f64>,
    pub cross_center_dip: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SfgScalars {
    pub broad_fwhm: Option<f64>,
    pub narrow_fwhm: Option<f64>,
    pub broad_height: f64,
    pub narrow_height: f64,
    pub visibility: Option<f64>,
    /// FWHM of the signal photon flux, s.
    pub flux_fwhm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomScalars {
    pub broad_fwhm: Option<f64>,
    pub narrow_fwhm: Option<f64>,
    /// Signed narrow residual of `1 - R_n^Δ` at zero delay: positive for a
    /// dip in `R_n^Δ`, negative for a peak.
    pub narrow_height: f64,
    pub center: Polarity,
    pub visibility: Option<f64>,
    /// Visibility of `1 + ` the coherent term alone.
    pub visibility_coherent: Option<f64>,
    /// Visibility of `1 + ` the pair term alone.
    pub visibility_pair: Option<f64>,
    pub coherent_fwhm: Option<f64>,
    pub pair_fwhm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub power: f64,
    /// Dominant triplet.
    pub triplet: TripletObservables,
    pub beam: BeamSummary,
    pub spectral: Option<SpectralScalars>,
    pub sfg: Option<SfgScalars>,
    pub hom: Option<HomScalars>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFailure {
    pub gamma: f64,
    pub power: f64,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<CellFailure>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn cells(&self) -> usize {
        self.rows.len() + self.failures.len()
    }

    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }

    /// Rows of one `γ`, in power order.
    pub fn rows_for(&self, gamma: f64) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.gamma == gamma)
    }
}

/// Power-independent inputs shared by all cells.
pub struct SweepContext {
    pub basis: SchmidtBasis,
    pub temporal: TemporalBasis,
    pub mask_factor: f64,
}

impl SweepContext {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        let basis = SchmidtBasis::new(&cfg.pump, &cfg.schmidt, &cfg.grids.frequency)?;
        let temporal = TemporalBasis::from_basis(&basis, cfg.grids.time_oversample)?;
        Ok(Self { basis, temporal, mask_factor: cfg.features.mask_factor })
    }

    /// Delays of the interference profiles: every time-grid shift.
    pub fn delays(&self) -> (Vec<isize>, Vec<f64>) {
        let grid = self.temporal.grid();
        let shifts = shift_range(grid.half_len());
        let taus = shifts.iter().map(|&s| s as f64 * grid.step()).collect();
        (shifts, taus)
    }

    pub fn state(&self, gamma: f64, power: f64) -> Result<TwinBeamState<'_>> {
        TwinBeamState::new(&self.basis, power, gamma)
    }

    pub fn cell(&self, gamma: f64, power: f64, stages: Stages) -> Result<SweepRow> {
        let tb = self.state(gamma, power)?;
        let triplet = tb.dominant_state().observables();
        let beam = aggregate_summary(&tb);
        let spectral = if stages.spectral {
            let auto = spectral_correlations(&tb, CorrelationKind::Auto(Field::Signal))?;
            let cross = spectral_correlations(&tb, CorrelationKind::Cross)?;
            Some(SpectralScalars {
                auto_fwhm: auto.central_fwhm(),
                cross_fwhm: cross.central_fwhm(),
                cross_center_dip: cross.central_is_dip(),
            })
        } else {
            None
        };
        let (shifts, taus) = if stages.sfg || stages.hom { self.delays() } else { (Vec::new(), Vec::new()) };
        let sfg = if stages.sfg {
            let prof = sfg_profile(&tb, &self.temporal, &shifts)?.normalized();
            let f = sfg_features(&prof.tau, &prof.total, self.mask_factor)?;
            let flux = photon_flux(&tb, &self.temporal.signal, Field::Signal)?;
            Some(SfgScalars {
                broad_fwhm: f.broad_fwhm,
                narrow_fwhm: f.narrow_fwhm,
                broad_height: f.broad_height,
                narrow_height: f.narrow_height,
                visibility: f.sfg_visibility(),
                flux_fwhm: fwhm(&self.temporal.grid().points(), &flux),
            })
        } else {
            None
        };
        let hom = if stages.hom {
            let h = hom_profiles(&tb, &BeamSplitter::balanced(), &taus)?;
            let f = hom_features(&h.tau, &h.r_n_delta, self.mask_factor)?;
            let shifted = |t: &[f64]| t.iter().map(|v| 1.0 + v).collect::<Vec<f64>>();
            let magnitude = |t: &[f64]| t.iter().map(|v| v.abs()).collect::<Vec<f64>>();
            Some(HomScalars {
                broad_fwhm: f.broad_fwhm,
                narrow_fwhm: f.narrow_fwhm,
                narrow_height: f.narrow_height,
                center: f.center,
                visibility: hom_visibility(&h.r_n_delta),
                visibility_coherent: hom_visibility(&shifted(&h.term_coherent)),
                visibility_pair: hom_visibility(&shifted(&h.term_pair)),
                coherent_fwhm: fwhm(&h.tau, &magnitude(&h.term_coherent)),
                pair_fwhm: fwhm(&h.tau, &magnitude(&h.term_pair)),
            })
        } else {
            None
        };
        Ok(SweepRow { gamma, power, triplet, beam, spectral, sfg, hom })
    }
}

/// Evaluates every `(γ, P)` cell; a failing cell is recorded and the sweep
/// continues.
pub fn sweep_cells(
    ctx: &SweepContext,
    gammas: &[f64],
    powers: &[f64],
    stages: Stages,
) -> (Vec<SweepRow>, Vec<CellFailure>) {
    let jobs: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| powers.iter().map(move |&p| (g, p))).collect();
    let results: Vec<Result<SweepRow>> = jobs.par_iter().map(|&(g, p)| ctx.cell(g, p, stages)).collect();
    let mut rows = Vec::with_capacity(jobs.len());
    let mut failures = Vec::new();
    for ((gamma, power), r) in jobs.into_iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(CellFailure { gamma, power, error: e.to_string() }),
        }
    }
    (rows, failures)
}

pub fn run_sweep_with(cfg: &RunConfig, gammas: &[f64], stages: Stages) -> Result<SweepResult> {
    let ctx = SweepContext::new(cfg)?;
    let (rows, failures) = sweep_cells(&ctx, gammas, &cfg.power_sweep.powers(), stages);
    Ok(SweepResult { rows, failures, provenance: Provenance::new(cfg) })
}

/// Full sweep over the configured `γ` list and powers.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult> {
    run_sweep_with(cfg, &cfg.gamma_list, Stages::ALL)
}

fn key(r: &SweepRow) -> [Cell; 2] {
    [r.gamma.into(), r.power.into()]
}

fn with_key(r: &SweepRow, rest: Vec<Cell>) -> Vec<Cell> {
    key(r).into_iter().chain(rest).collect()
}

pub fn triplet_table(rows: &[SweepRow]) -> Table {
    let mut cols = vec!["gamma".to_string(), "power_w".into()];
    for what in ["i", "coherent", "chaotic", "variance"] {
        cols.extend(Field::ALL.iter().map(|f| format!("{what}_{}", f.label())));
    }
    cols.extend(Field::ALL.iter().map(|f| format!("c_{}", f.label())));
    cols.extend(Field::ALL.iter().map(|f| format!("r_{}", f.label())));
    cols.extend(Pair::ALL.iter().map(|p| format!("covariance_{}", p.label())));
    cols.extend(Pair::ALL.iter().map(|p| format!("r_{}", p.label())));
    cols.push("big_r_si".into());
    cols.extend(Field::ALL.iter().map(|f| format!("lambda_{}", f.label())));
    let mut t = Table::with_columns("triplet", cols);
    for r in rows {
        let o = &r.triplet;
        let mut c: Vec<Cell> = Vec::new();
        for arr in [&o.intensity, &o.coherent, &o.chaotic, &o.variance] {
            c.extend(arr.iter().map(|v| Cell::from(*v)));
        }
        c.extend((0..3).map(|k| Cell::from(crate::statistics::ratio(o.coherent[k], o.intensity[k]))));
        c.extend(o.r.iter().map(|v| Cell::from(*v)));
        c.extend(o.covariance.iter().map(|v| Cell::from(*v)));
        c.extend(o.r_pair.iter().map(|v| Cell::from(*v)));
        c.push(o.r_si.into());
        c.extend(o.squeeze.iter().map(|v| Cell::from(*v)));
        t.push(with_key(r, c));
    }
    t
}

pub fn beam_table(rows: &[SweepRow]) -> Table {
    let mut cols = vec!["gamma".to_string(), "power_w".into()];
    for what in ["mean", "coherent", "chaotic", "variance", "r"] {
        cols.extend(Field::ALL.iter().map(|f| format!("{what}_{}", f.label())));
    }
    cols.extend(["c_s_coherent", "c_p_chaotic"].map(String::from));
    cols.extend(Pair::ALL.iter().map(|p| format!("covariance_{}", p.label())));
    cols.extend(Pair::ALL.iter().map(|p| format!("r_{}", p.label())));
    cols.extend(["big_r_si", "k_intensity", "k_pairs", "conversion_efficiency"].map(String::from));
    let mut t = Table::with_columns("beam", cols);
    for r in rows {
        let b = &r.beam;
        let mut c: Vec<Cell> = Vec::new();
        c.extend(b.fields.iter().map(|f| Cell::from(f.mean)));
        c.extend(b.fields.iter().map(|f| Cell::from(f.coherent)));
        c.extend(b.fields.iter().map(|f| Cell::from(f.chaotic)));
        c.extend(b.fields.iter().map(|f| Cell::from(f.variance)));
        c.extend(b.fields.iter().map(|f| Cell::from(f.r)));
        let s = b.field(Field::Signal);
        let p = b.field(Field::Pump);
        c.push(crate::statistics::ratio(s.coherent, s.mean).into());
        c.push(crate::statistics::ratio(p.chaotic, p.mean).into());
        c.extend(b.covariance.iter().map(|v| Cell::from(*v)));
        c.extend(b.r_pair.iter().map(|v| Cell::from(*v)));
        c.push(b.r_si.into());
        c.push(b.mode_count_intensity.into());
        c.push(b.mode_count_pairs.into());
        c.push(b.conversion_efficiency.into());
        t.push(with_key(r, c));
    }
    t
}

pub fn spectral_table(rows: &[SweepRow]) -> Table {
    let mut t =
        Table::new("spectral", &["gamma", "power_w", "auto_fwhm_rad_s", "cross_fwhm_rad_s", "cross_center_dip"]);
    for r in rows {
        if let Some(s) = &r.spectral {
            t.push(with_key(r, vec![s.auto_fwhm.into(), s.cross_fwhm.into(), s.cross_center_dip.into()]));
        }
    }
    t
}

pub fn sfg_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(
        "sfg",
        &[
            "gamma",
            "power_w",
            "broad_fwhm_s",
            "narrow_fwhm_s",
            "broad_height",
            "narrow_height",
            "visibility",
            "signal_flux_fwhm_s",
        ],
    );
    for r in rows {
        if let Some(s) = &r.sfg {
            t.push(with_key(
                r,
                vec![
                    s.broad_fwhm.into(),
                    s.narrow_fwhm.into(),
                    s.broad_height.into(),
                    s.narrow_height.into(),
                    s.visibility.into(),
                    s.flux_fwhm.into(),
                ],
            ));
        }
    }
    t
}

fn polarity(p: Polarity) -> &'static str {
    match p {
        Polarity::Dip => "dip",
        Polarity::Peak => "peak",
        Polarity::Flat => "flat",
    }
}

pub fn hom_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(
        "hom",
        &[
            "gamma",
            "power_w",
            "broad_fwhm_s",
            "narrow_fwhm_s",
            "narrow_height",
            "center",
            "visibility",
            "visibility_coherent",
            "visibility_pair",
            "coherent_fwhm_s",
            "pair_fwhm_s",
        ],
    );
    for r in rows {
        if let Some(h) = &r.hom {
            t.push(with_key(
                r,
                vec![
                    h.broad_fwhm.into(),
                    h.narrow_fwhm.into(),
                    h.narrow_height.into(),
                    polarity(h.center).into(),
                    h.visibility.into(),
                    h.visibility_coherent.into(),
                    h.visibility_pair.into(),
                    h.coherent_fwhm.into(),
                    h.pair_fwhm.into(),
                ],
            ));
        }
    }
    t
}

pub fn failure_table(failures: &[CellFailure]) -> Table {
    let mut t = Table::new("failures", &["gamma", "power_w", "error"]);
    for f in failures {
        t.push(vec![f.gamma.into(), f.power.into(), f.error.clone().into()]);
    }
    t
}

impl SweepResult {
    /// One table per observable family plus the failure list.
    pub fn tables(&self) -> Vec<Table> {
        let mut out = vec![triplet_table(&self.rows), beam_table(&self.rows)];
        for t in [spectral_table(&self.rows), sfg_table(&self.rows), hom_table(&self.rows)] {
            if !t.rows.is_empty() {
                out.push(t);
            }
        }
        out.push(failure_table(&self.failures));
        out
    }
}
