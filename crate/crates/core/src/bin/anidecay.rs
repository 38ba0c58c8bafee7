use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::warn;

use anidecay::decay::{acceptance_from_rows, compare_modes, fit_power_law, fourier_splitting_from_rows, Tolerances};
use anidecay::duhamel::DuhamelAccumulator;
use anidecay::io::{
    self, csv_string, emit_record, parse_config, parse_formats, read_norm_rows, save_checkpoint, write_json,
    write_manifest, write_text, CheckReport, Format, Manifest,
};
use anidecay::norms::NormReport;
use anidecay::solver::{energy_budget, run_observed, Observer, RunConfig};
use anidecay::Error;

#[derive(Parser)]
#[command(name = "anidecay", version, about = "Decay experiments for Navier-Stokes with horizontal dissipation")]
struct Cli {
    /// Flat TOML config; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override a config key, e.g. `--set dt=1e-3`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads; falls back to ANIDECAY_THREADS.
    #[arg(long, global = true, env = "ANIDECAY_THREADS")]
    threads: Option<usize>,
    /// Comma-separated: csv, json, svg.
    #[arg(long, global = true, default_value = "csv,json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate initial data: checkpoint and data functionals.
    GenData,
    /// Integrate and write series, checkpoint and Duhamel residuals.
    Run,
    /// Linear tier: exact semigroup and quadrature decay rates.
    VerifyLinear,
    /// Spectral, dyadic, kernel and energy identities.
    VerifyIdentities,
    /// Power-law fits of every column of a rows CSV over the config window.
    Fit { rows: PathBuf },
    /// Acceptance report and Fourier-splitting check of a run directory.
    Report { dir: PathBuf },
    /// Paired anisotropic and isotropic runs.
    Compare,
}

enum Outcome {
    Pass,
    Fail,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BlowUp { .. } => 3,
        Error::Config(_)
        | Error::InvalidParameter { .. }
        | Error::ParameterGate { .. }
        | Error::InvalidGrid(_)
        | Error::InsufficientCadence { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            warn!("thread pool: {e}");
        }
    }
    match dispatch(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn checks(report: CheckReport, out: &Path, name: &str) -> anidecay::Result<Outcome> {
    print!("{report}");
    write_json(&out.join(format!("{name}.json")), &report)?;
    Ok(if report.pass() { Outcome::Pass } else { Outcome::Fail })
}

fn dispatch(cli: &Cli) -> anidecay::Result<Outcome> {
    let formats = parse_formats(&cli.format)?;
    let config = || parse_config(cli.config.as_deref(), &cli.overrides);
    let out = cli.out.as_path();
    match &cli.command {
        Command::GenData => {
            let c = config()?;
            write_manifest(out, "gen-data", &c)?;
            let (v0, report) = c.initial_data()?;
            save_checkpoint(&out.join("initial.ansd"), &v0, 0.0)?;
            write_json(&out.join("initial_data.json"), &report)?;
            println!("A_s = {:.6e}  B_s = {:.6e}  c0 = {:.6e}", report.a_s, report.b_s, report.c0_norm);
            Ok(Outcome::Pass)
        }
        Command::Run => {
            let c = config()?;
            write_manifest(out, "run", &c)?;
            run_command(&c, out, &formats)
        }
        Command::VerifyLinear => checks(io::verify_linear()?, out, "verify_linear"),
        Command::VerifyIdentities => checks(io::verify_identities()?, out, "verify_identities"),
        Command::Fit { rows } => {
            let c = config()?;
            let f = std::fs::File::open(rows).map_err(|e| Error::Io {
                path: rows.clone(),
                source: e,
            })?;
            let rows = read_norm_rows(f)?;
            let t: Vec<f64> = rows.iter().map(|r| r.t).collect();
            let mut fits = Vec::new();
            for &name in &NormReport::COLUMNS[1..] {
                let y: Vec<f64> = rows.iter().map(|r| r.get(name).unwrap_or_default()).collect();
                match fit_power_law(name, &t, &y, (c.fit_t0, c.fit_t1)) {
                    Ok(fit) => {
                        println!("{name:<20} {:+.4} ± {:.4}  R² {:.5}", fit.exponent, fit.stderr, fit.r_squared);
                        fits.push(fit);
                    }
                    Err(e) => warn!("{name}: {e}"),
                }
            }
            write_json(&out.join("fits.json"), &fits)?;
            Ok(Outcome::Pass)
        }
        Command::Report { dir } => {
            let m = Manifest::load(&dir.join("manifest.json"))?;
            let path = dir.join("rows.csv");
            let f = std::fs::File::open(&path).map_err(|e| Error::Io { path, source: e })?;
            let rows = read_norm_rows(f)?;
            let c = &m.config;
            let report = acceptance_from_rows(&rows, c.s, c.l_h, (c.fit_t0, c.fit_t1), Tolerances::default())?;
            let split = fourier_splitting_from_rows(&rows, c.s)?;
            print!("{report}");
            println!(
                "  {:<4} {:<26} max ratio {:.6}",
                if split.holds { "PASS" } else { "FAIL" },
                "fourier splitting",
                split.max_ratio
            );
            write_json(&out.join("acceptance.json"), &report)?;
            write_text(&out.join("acceptance.txt"), &report.to_string())?;
            write_text(
                &out.join("splitting.csv"),
                &csv_string(&["t", "lhs", "rhs", "ratio"], split.rows.iter().map(|r| [r.t, r.lhs, r.rhs, r.ratio]))?,
            )?;
            Ok(if report.ordering.pass && split.holds { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Compare => {
            let c = config()?;
            write_manifest(out, "compare", &c)?;
            let m = compare_modes(&c)?;
            for s in [&m.anisotropic, &m.isotropic] {
                println!(
                    "{:<12} v3 {:+.4}  vh {:+.4}  gap {:+.4}  E(t_end) {:.6e}",
                    s.mode.name(),
                    s.v3_fit.exponent,
                    s.vh_fit.exponent,
                    s.gap,
                    s.final_energy
                );
            }
            write_json(&out.join("compare.json"), &m)?;
            Ok(Outcome::Pass)
        }
    }
}

fn run_command(c: &RunConfig, out: &Path, formats: &[Format]) -> anidecay::Result<Outcome> {
    let grid = c.grid()?;
    let (v0, _) = c.initial_data()?;
    let mut accs = c
        .duhamel_cadences
        .iter()
        .map(|&h| DuhamelAccumulator::new(grid, c.mode, c.dealias, c.dt, c.stride("duhamel_cadences", h)?))
        .collect::<anidecay::Result<Vec<_>>>()?;
    let mut observers: Vec<&mut dyn Observer> = accs.iter_mut().map(|a| a as &mut dyn Observer).collect();
    let record = run_observed(c, v0, &mut observers)?;
    emit_record(out, &record, formats)?;
    save_checkpoint(&out.join("final.ansd"), &record.final_field, c.t_end)?;
    let budget = energy_budget(&record);
    println!(
        "energy residual max {:.3e}, excess over quadrature {:.3e}, divergence {:.3e}",
        budget.max_residual(),
        budget.max_excess(),
        record.max_divergence()
    );
    let mut duhamel = Vec::new();
    for a in &accs {
        let name = format!("duhamel_{}.csv", a.spacing());
        write_text(&out.join(&name), &csv_string(&["t", "residual"], a.residuals().iter().map(|(t, r)| [*t, *r]))?)?;
        println!("duhamel spacing {}: max residual {:.3e}", a.spacing(), a.max_residual_after(0.0));
        duhamel.push((a.spacing(), a.max_residual_after(0.0)));
    }
    write_json(
        &out.join("summary.json"),
        &serde_json::json!({
            "cfl": record.cfl,
            "energy_max_residual": budget.max_residual(),
            "energy_max_excess": budget.max_excess(),
            "max_divergence": record.max_divergence(),
            "duhamel_max_residual": duhamel,
        }),
    )?;
    Ok(Outcome::Pass)
}
