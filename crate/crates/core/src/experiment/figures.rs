//! One recipe per figure: the γ values, powers, axes and normalizations
//! named in the figure captions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interference::{hom_profiles, sfg_profile, BeamSplitter};
use crate::statistics::{ratio, Field, Pair};
use crate::twinbeam::{incident_pump_spectrum, pump_transferred_spectrum, spectral_correlations, CorrelationKind};

use super::config::{RunConfig, FIGURE_IDS};
use super::output::{Cell, Table};
use super::sweep::{sweep_cells, CellFailure, Stages, SweepContext, SweepRow};

const GAMMAS_FOUR: [f64; 4] = [0.0, 0.1, 0.5, 1.0];
const GAMMAS_WEAK: [f64; 4] = [0.01, 0.1, 0.5, 1.0];
const GAMMAS_THREE: [f64; 3] = [0.0, 0.5, 1.0];
/// Fixed power of the profile figures, W.
pub const PROFILE_POWER: f64 = 0.17;

#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub id: u32,
    pub tables: Vec<Table>,
    pub failures: Vec<CellFailure>,
}

type Column = (&'static str, fn(&SweepRow) -> Cell);

fn tri_share(r: &SweepRow, f: Field) -> Cell {
    let k = f.index();
    ratio(r.triplet.coherent[k], r.triplet.intensity[k]).into()
}

fn spectral(r: &SweepRow) -> &super::sweep::SpectralScalars {
    r.spectral.as_ref().expect("spectral stage enabled")
}

fn sfg(r: &SweepRow) -> &super::sweep::SfgScalars {
    r.sfg.as_ref().expect("sfg stage enabled")
}

fn hom(r: &SweepRow) -> &super::sweep::HomScalars {
    r.hom.as_ref().expect("hom stage enabled")
}

/// `(γ list, stages, columns)` of a power-sweep figure.
fn sweep_recipe(id: u32) -> Option<(&'static [f64], Stages, Vec<Column>)> {
    let s = Stages::SUMMARY;
    let recipe: (&'static [f64], Stages, Vec<Column>) = match id {
        1 => (
            &GAMMAS_FOUR,
            s,
            vec![("i_s", |r| r.triplet.intensity[0].into()), ("i_p", |r| r.triplet.intensity[2].into())],
        ),
        2 => (&GAMMAS_FOUR, s, vec![("c_s", |r| tri_share(r, Field::Signal)), ("c_p", |r| tri_share(r, Field::Pump))]),
        3 => (&GAMMAS_FOUR, s, vec![("r_s", |r| r.triplet.r[0].into()), ("r_p", |r| r.triplet.r[2].into())]),
        4 => (&GAMMAS_FOUR, s, vec![("lambda_p", |r| r.triplet.squeeze[2].into())]),
        5 => (&GAMMAS_WEAK, s, vec![("big_r_si", |r| r.triplet.r_si.into())]),
        6 => (
            &GAMMAS_FOUR,
            s,
            vec![
                ("r_si", |r| r.triplet.r_pair[Pair::SignalIdler.index()].into()),
                ("r_ps", |r| r.triplet.r_pair[Pair::SignalPump.index()].into()),
            ],
        ),
        8 => (
            &GAMMAS_FOUR,
            s,
            vec![
                ("mean_s", |r| r.beam.field(Field::Signal).mean.into()),
                ("conversion_efficiency", |r| r.beam.conversion_efficiency.into()),
            ],
        ),
        9 => (
            &GAMMAS_FOUR,
            s,
            vec![
                ("c_s_coherent", |r| {
                    let f = r.beam.field(Field::Signal);
                    ratio(f.coherent, f.mean).into()
                }),
                ("c_p_chaotic", |r| {
                    let f = r.beam.field(Field::Pump);
                    ratio(f.chaotic, f.mean).into()
                }),
            ],
        ),
        11 => (
            &GAMMAS_THREE,
            s,
            vec![
                ("k_intensity", |r| r.beam.mode_count_intensity.into()),
                ("k_pairs", |r| r.beam.mode_count_pairs.into()),
            ],
        ),
        12 => (
            &GAMMAS_THREE,
            Stages { spectral: true, ..s },
            vec![
                ("auto_fwhm_rad_s", |r| spectral(r).auto_fwhm.into()),
                ("cross_fwhm_rad_s", |r| spectral(r).cross_fwhm.into()),
            ],
        ),
        14 => (&GAMMAS_WEAK, s, vec![("big_r_si", |r| r.beam.r_si.into())]),
        15 => (&GAMMAS_FOUR, s, vec![("r_si", |r| r.beam.r_pair[Pair::SignalIdler.index()].into())]),
        17 => (
            &GAMMAS_THREE,
            Stages { sfg: true, ..s },
            vec![
                ("broad_fwhm_s", |r| sfg(r).broad_fwhm.into()),
                ("signal_flux_fwhm_s", |r| sfg(r).flux_fwhm.into()),
                ("narrow_fwhm_s", |r| sfg(r).narrow_fwhm.into()),
            ],
        ),
        18 => (&GAMMAS_THREE, Stages { sfg: true, ..s }, vec![("visibility", |r| sfg(r).visibility.into())]),
        20 => (
            &GAMMAS_THREE,
            Stages { hom: true, ..s },
            vec![
                ("visibility", |r| hom(r).visibility.into()),
                ("visibility_coherent", |r| hom(r).visibility_coherent.into()),
                ("visibility_pair", |r| hom(r).visibility_pair.into()),
            ],
        ),
        21 => (
            &GAMMAS_THREE,
            Stages { hom: true, ..s },
            vec![
                ("broad_fwhm_s", |r| hom(r).broad_fwhm.into()),
                ("coherent_fwhm_s", |r| hom(r).coherent_fwhm.into()),
                ("pair_fwhm_s", |r| hom(r).pair_fwhm.into()),
            ],
        ),
        _ => return None,
    };
    Some(recipe)
}

fn name(id: u32) -> String {
    format!("figure{id:02}")
}

fn gamma_label(g: f64) -> String {
    format!("g{g}")
}

fn sweep_figure(ctx: &SweepContext, cfg: &RunConfig, id: u32) -> FigureOutput {
    let (gammas, stages, columns) = sweep_recipe(id).expect("sweep figure id");
    let (rows, failures) = sweep_cells(ctx, gammas, &cfg.power_sweep.powers(), stages);
    let mut names = vec!["gamma", "power_w"];
    names.extend(columns.iter().map(|c| c.0));
    let mut t = Table::new(name(id), &names);
    for r in &rows {
        let mut cells = vec![Cell::from(r.gamma), Cell::from(r.power)];
        cells.extend(columns.iter().map(|c| (c.1)(r)));
        t.push(cells);
    }
    FigureOutput { id, tables: vec![t], failures }
}

/// Mode intensity profiles scaled so that `∫ dω |f|² / ω⁰ = 1`.
fn figure07(ctx: &SweepContext) -> Vec<Table> {
    let b = &ctx.basis;
    let sg = b.signal.grid();
    let n_s = b.signal.len().min(3);
    let mut cols = vec!["omega_rel".to_string()];
    cols.extend((1..=n_s).map(|j| format!("f_s_{j}")));
    let mut sig = Table::with_columns("figure07_signal", cols);
    let scale = |grid: &crate::grid::FrequencyGrid, f: &[num_complex::Complex64]| {
        let area = grid.norm_sqr(f);
        if area > 0.0 {
            grid.center() / area
        } else {
            0.0
        }
    };
    let sig_scale: Vec<f64> = (0..n_s).map(|j| scale(sg, b.signal.mode(j))).collect();
    for k in 0..sg.len() {
        let mut row = vec![Cell::from(sg.point(k) / sg.center())];
        row.extend((0..n_s).map(|j| Cell::from(b.signal.mode(j)[k].norm_sqr() * sig_scale[j])));
        sig.push(row);
    }
    let pg = b.pump_modes.grid();
    let n_p = b.pump_modes.len().min(3);
    let mut cols = vec!["omega_rel".to_string()];
    cols.extend((1..=n_p).map(|j| format!("f_p_{j}")));
    let mut pump = Table::with_columns("figure07_pump", cols);
    let pump_scale: Vec<f64> = (0..n_p).map(|j| scale(pg, b.pump_modes.mode(j))).collect();
    for k in 0..pg.len() {
        let mut row = vec![Cell::from(pg.point(k) / pg.center())];
        row.extend((0..n_p).map(|j| Cell::from(b.pump_modes.mode(j)[k].norm_sqr() * pump_scale[j])));
        pump.push(row);
    }
    vec![sig, pump]
}

const FIG10_POWERS: [f64; 2] = [1e-8, PROFILE_POWER];
const FIG10_GAMMAS: [f64; 2] = [0.0, 1.0];

fn figure10(ctx: &SweepContext) -> (Vec<Table>, Vec<CellFailure>) {
    let jobs: Vec<(f64, f64)> = FIG10_POWERS.iter().flat_map(|&p| FIG10_GAMMAS.iter().map(move |&g| (g, p))).collect();
    let spectra: Vec<Result<Vec<f64>>> =
        jobs.par_iter().map(|&(g, p)| ctx.state(g, p).map(|tb| pump_transferred_spectrum(&tb, true))).collect();
    let grid = ctx.basis.pump_modes.grid();
    let incident = incident_pump_spectrum(&ctx.basis);
    let mut cols = vec!["omega_rel".to_string(), "incident".into()];
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for (&(g, p), s) in jobs.iter().zip(spectra) {
        match s {
            Ok(v) => {
                cols.push(format!("transferred_{}_p{p}", gamma_label(g)));
                ok.push(v);
            }
            Err(e) => failures.push(CellFailure { gamma: g, power: p, error: e.to_string() }),
        }
    }
    let mut t = Table::with_columns(name(10), cols);
    for k in 0..grid.len() {
        let mut row = vec![Cell::from(grid.point(k) / grid.center()), Cell::from(incident[k])];
        row.extend(ok.iter().map(|v| Cell::from(v[k])));
        t.push(row);
    }
    (vec![t], failures)
}

const FIG13_GAMMAS: [f64; 3] = [0.0, 0.8, 1.0];

/// `C(ω_s, ω_i⁰) / max`.
fn figure13(ctx: &SweepContext) -> (Vec<Table>, Vec<CellFailure>) {
    let sections: Vec<Result<Vec<f64>>> = FIG13_GAMMAS
        .par_iter()
        .map(|&g| {
            let tb = ctx.state(g, PROFILE_POWER)?;
            let s = spectral_correlations(&tb, CorrelationKind::Cross)?.central_section();
            let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !(max > 0.0) {
                return Err(Error::Division("cross-correlation section has no positive maximum".into()));
            }
            Ok(s.into_iter().map(|v| v / max).collect())
        })
        .collect();
    let grid = ctx.basis.signal.grid();
    let mut cols = vec!["omega_rel".to_string()];
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for (&g, s) in FIG13_GAMMAS.iter().zip(sections) {
        match s {
            Ok(v) => {
                cols.push(format!("c_r_{}", gamma_label(g)));
                ok.push(v);
            }
            Err(e) => failures.push(CellFailure { gamma: g, power: PROFILE_POWER, error: e.to_string() }),
        }
    }
    let mut t = Table::with_columns(name(13), cols);
    for k in 0..grid.len() {
        let mut row = vec![Cell::from(grid.point(k) / grid.center())];
        row.extend(ok.iter().map(|v| Cell::from(v[k])));
        t.push(row);
    }
    (vec![t], failures)
}

/// Normalized sum-frequency profile with its four terms; the value equals
/// `baseline + pair + linear - coherent`.
pub fn sfg_curve(ctx: &SweepContext, gamma: f64, power: f64, name: impl Into<String>) -> Result<Table> {
    let tb = ctx.state(gamma, power)?;
    let (shifts, _) = ctx.delays();
    let p = sfg_profile(&tb, &ctx.temporal, &shifts)?.normalized();
    let mut t = Table::new(name, &["tau_s", "value", "term_baseline", "term_pair", "term_linear", "term_coherent"]);
    for k in 0..p.tau.len() {
        t.push(vec![
            p.tau[k].into(),
            p.total[k].into(),
            p.baseline[k].into(),
            p.pair[k].into(),
            p.linear[k].into(),
            p.coherent[k].into(),
        ]);
    }
    Ok(t)
}

/// `R_n^Δ(τ) = 1 + term_coherent + term_pair + term_chaotic`.
pub fn hom_curve(ctx: &SweepContext, gamma: f64, power: f64, name: impl Into<String>) -> Result<Table> {
    let tb = ctx.state(gamma, power)?;
    let (_, taus) = ctx.delays();
    let h = hom_profiles(&tb, &BeamSplitter::balanced(), &taus)?;
    let mut t = Table::new(name, &["tau_s", "value", "term_coherent", "term_pair", "term_chaotic"]);
    for k in 0..h.tau.len() {
        t.push(vec![
            h.tau[k].into(),
            h.r_n_delta[k].into(),
            h.term_coherent[k].into(),
            h.term_pair[k].into(),
            h.term_chaotic[k].into(),
        ]);
    }
    Ok(t)
}

type Curve = fn(&SweepContext, f64, f64, String) -> Result<Table>;

fn curve_figure(ctx: &SweepContext, id: u32, curve: Curve) -> (Vec<Table>, Vec<CellFailure>) {
    let out: Vec<Result<Table>> = GAMMAS_THREE
        .par_iter()
        .map(|&g| curve(ctx, g, PROFILE_POWER, format!("{}_{}", name(id), gamma_label(g))))
        .collect();
    let mut tables = Vec::new();
    let mut failures = Vec::new();
    for (&g, r) in GAMMAS_THREE.iter().zip(out) {
        match r {
            Ok(t) => tables.push(t),
            Err(e) => failures.push(CellFailure { gamma: g, power: PROFILE_POWER, error: e.to_string() }),
        }
    }
    (tables, failures)
}

/// Emits the curves of figure `id` for the configured basis and sweep.
pub fn figure(cfg: &RunConfig, id: u32) -> Result<FigureOutput> {
    if !FIGURE_IDS.contains(&id) {
        return Err(Error::UnknownFigure(id));
    }
    let ctx = SweepContext::new(cfg)?;
    figure_with(&ctx, cfg, id)
}

pub fn figure_with(ctx: &SweepContext, cfg: &RunConfig, id: u32) -> Result<FigureOutput> {
    let (tables, failures) = match id {
        7 => (figure07(ctx), Vec::new()),
        10 => figure10(ctx),
        13 => figure13(ctx),
        16 => curve_figure(ctx, 16, sfg_curve),
        19 => curve_figure(ctx, 19, hom_curve),
        id if sweep_recipe(id).is_some() => return Ok(sweep_figure(ctx, cfg, id)),
        id => return Err(Error::UnknownFigure(id)),
    };
    Ok(FigureOutput { id, tables, failures })
}
