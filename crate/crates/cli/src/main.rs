use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use twinbeam_core::dynamics::TripletParams;
use twinbeam_core::experiment::sweep::{beam_table, failure_table, triplet_table};
use twinbeam_core::experiment::{
    figure_with, hom_curve, load_config, run_sweep, sfg_curve, write_tables, CellFailure, Provenance, RunConfig,
    Stages, SweepContext, Table,
};
use twinbeam_core::fock::{oracle_compare, trilinear_propagate};
use twinbeam_core::statistics::evolve_state;

#[derive(Parser)]
#[command(name = "twinbeam", version, about = "Intense twin-beam sweeps, figure recipes and interference scans")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON run configuration; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `outputs.directory`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Comma-separated γ values (overrides `gamma_list`).
    #[arg(long, global = true, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep pump power for every γ and write one CSV per observable family.
    Sweep,
    /// Write the curves of one figure (1..=21), or of `outputs.figures`.
    Figure { id: Option<u32> },
    /// Dominant-triplet and whole-beam observables at one pump power.
    Triplet(PowerArg),
    /// Normalized sum-frequency profile per γ.
    Sfg(PowerArg),
    /// Normalized HOM correlation profile per γ.
    Hom(PowerArg),
    /// Compare the Gaussian model with exact trilinear Fock dynamics.
    #[command(hide = true)]
    Oracle {
        #[arg(long, default_value_t = 10)]
        n_p0: usize,
        /// Gain `K z √n_p0`.
        #[arg(long, default_value_t = 0.3)]
        gain: f64,
    },
}

#[derive(Args)]
struct PowerArg {
    /// Pump power in W (default: `pump.power`).
    #[arg(long)]
    power: Option<f64>,
}

enum Outcome {
    Complete,
    Partial(usize),
}

fn configure(g: &Global) -> anyhow::Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => load_config(p).with_context(|| format!("loading {}", p.display()))?,
        None => RunConfig::default(),
    };
    if let Some(out) = &g.out {
        cfg.outputs.directory = out.to_string_lossy().into_owned();
    }
    if let Some(gs) = &g.gamma {
        cfg.gamma_list = gs.clone();
    }
    let errors = cfg.validate();
    if !errors.is_empty() {
        return Err(twinbeam_core::Error::Config(errors).into());
    }
    Ok(cfg)
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn finish(
    tables: &[Table],
    failures: &[CellFailure],
    dir: &Path,
    prov: &Provenance,
    cells: usize,
) -> anyhow::Result<Outcome> {
    let mut all = tables.to_vec();
    all.push(failure_table(failures));
    report(&write_tables(&all, dir, prov, cells, failures.len())?);
    for f in failures {
        eprintln!("cell gamma={} power={} W failed: {}", f.gamma, f.power, f.error);
    }
    Ok(if failures.is_empty() { Outcome::Complete } else { Outcome::Partial(failures.len()) })
}

fn gamma_name(prefix: &str, g: f64) -> String {
    format!("{prefix}_g{g}")
}

fn per_gamma_curves(
    cfg: &RunConfig,
    power: f64,
    prefix: &str,
    curve: fn(&SweepContext, f64, f64, String) -> twinbeam_core::Result<Table>,
) -> anyhow::Result<Outcome> {
    let ctx = SweepContext::new(cfg)?;
    let mut tables = Vec::new();
    let mut failures = Vec::new();
    for &g in &cfg.gamma_list {
        match curve(&ctx, g, power, gamma_name(prefix, g)) {
            Ok(t) => tables.push(t),
            Err(e) => failures.push(CellFailure { gamma: g, power, error: e.to_string() }),
        }
    }
    let cells = cfg.gamma_list.len();
    finish(&tables, &failures, Path::new(&cfg.outputs.directory), &Provenance::new(cfg), cells)
}

fn oracle(n_p0: usize, gain: f64, gammas: &[f64]) -> anyhow::Result<Outcome> {
    if !(gain >= 0.0) || n_p0 == 0 {
        bail!("oracle needs n_p0 >= 1 and a non-negative gain");
    }
    let k = 1.0;
    let z = gain / (n_p0 as f64).sqrt();
    let exact = trilinear_propagate(k, n_p0, z, n_p0)?;
    println!("n_p0 = {n_p0}, K z sqrt(n_p0) = {gain}");
    println!(
        "{:>6} {:>14} {:>14} {:>10} {:>14} {:>14} {:>10}",
        "gamma", "n_s model", "n_s exact", "rel", "n_p model", "n_p exact", "rel"
    );
    for &g in gammas {
        let p = TripletParams::vacuum_seeded(k, n_p0 as f64, g, z)?;
        let model = evolve_state(&p, z, (n_p0 as f64).sqrt())?;
        let r = oracle_compare(&model, &exact);
        println!(
            "{g:>6} {:>14.6e} {:>14.6e} {:>10.3e} {:>14.6e} {:>14.6e} {:>10.3e}",
            r.mean_signal.model,
            r.mean_signal.exact,
            r.mean_signal.relative_error(),
            r.mean_pump.model,
            r.mean_pump.exact,
            r.mean_pump.relative_error()
        );
    }
    Ok(Outcome::Complete)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    let cfg = configure(&cli.global)?;
    let dir = PathBuf::from(&cfg.outputs.directory);
    match cli.command {
        Command::Sweep => {
            let res = run_sweep(&cfg)?;
            report(&write_tables(&res.tables(), &dir, &res.provenance, res.cells(), res.failures.len())?);
            for f in &res.failures {
                eprintln!("cell gamma={} power={} W failed: {}", f.gamma, f.power, f.error);
            }
            println!("{} of {} cells succeeded", res.rows.len(), res.cells());
            Ok(if res.is_partial() { Outcome::Partial(res.failures.len()) } else { Outcome::Complete })
        }
        Command::Figure { id } => {
            let ids = match id {
                Some(id) => vec![id],
                None => cfg.outputs.figures.clone(),
            };
            if let Some(bad) = ids.iter().find(|i| !(1..=21).contains(*i)) {
                return Err(twinbeam_core::Error::UnknownFigure(*bad).into());
            }
            let ctx = SweepContext::new(&cfg)?;
            let prov = Provenance::new(&cfg);
            let mut failed = 0;
            for id in ids {
                let fig = figure_with(&ctx, &cfg, id)?;
                let mut tables = fig.tables.clone();
                if !fig.failures.is_empty() {
                    let mut t = failure_table(&fig.failures);
                    t.name = format!("figure{id:02}_failures");
                    tables.push(t);
                }
                for t in &tables {
                    println!("wrote {}", t.write(&dir, &prov)?.display());
                }
                for f in &fig.failures {
                    eprintln!("figure {id}: cell gamma={} power={} W failed: {}", f.gamma, f.power, f.error);
                }
                failed += fig.failures.len();
            }
            Ok(if failed == 0 { Outcome::Complete } else { Outcome::Partial(failed) })
        }
        Command::Triplet(p) => {
            let power = p.power.unwrap_or(cfg.pump.power);
            let ctx = SweepContext::new(&cfg)?;
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            for &g in &cfg.gamma_list {
                match ctx.cell(g, power, Stages::SUMMARY) {
                    Ok(r) => rows.push(r),
                    Err(e) => failures.push(CellFailure { gamma: g, power, error: e.to_string() }),
                }
            }
            let cells = cfg.gamma_list.len();
            finish(&[triplet_table(&rows), beam_table(&rows)], &failures, &dir, &Provenance::new(&cfg), cells)
        }
        Command::Sfg(p) => per_gamma_curves(&cfg, p.power.unwrap_or(cfg.pump.power), "sfg", sfg_curve),
        Command::Hom(p) => per_gamma_curves(&cfg, p.power.unwrap_or(cfg.pump.power), "hom", hom_curve),
        Command::Oracle { n_p0, gain } => oracle(n_p0, gain, &cfg.gamma_list),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for partial runs
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Partial(n)) => {
            eprintln!("{n} cell(s) failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
