//! Command-line front end: `gen`, `simulate`, `validate` and `study`.
//!
//! Exit codes: 0 ok, 1 validation failure, 2 configuration or input error,
//! 3 blow-up abort, 4 numerical failure.

pub mod checkpoint;
pub mod config;
pub mod output;
pub mod study;
pub mod validate;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::energy::EnergyReport;
use crate::error::{Error, Result};
use crate::evolution::{evolve, Status};

use config::Config;
use study::Study;
use validate::Corruption;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "capwave", version, about = "Capillary-gravity water waves in conformal coordinates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the initial checkpoint and print its energy report.
    Gen(Common),
    /// Integrate to T, writing checkpoints and the energy CSV.
    Simulate(Common),
    /// Run the identity and invariant suite.
    Validate(Common),
    /// Run a parameter sweep and write `study_<name>.csv`.
    Study {
        #[arg(value_enum)]
        name: Study,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// TOML configuration file.
    pub config: PathBuf,
    /// Overrides of the form `--section.key=value`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    pub overrides: Vec<String>,
}

impl Common {
    fn load(&self) -> Result<Config> {
        Config::load(&self.config, &self.overrides)
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Integration { .. } | Error::StateQuality(_) | Error::Winding(_) => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

fn dispatch(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Gen(c) => cmd_gen(&c.load()?),
        Command::Simulate(c) => cmd_simulate(&c.load()?),
        Command::Validate(c) => cmd_validate(&c.load()?),
        Command::Study { name, common } => cmd_study(*name, &common.load()?),
    }
}

fn output_dir(config: &Config) -> Result<&Path> {
    let dir = config.outputs.dir.as_path();
    std::fs::create_dir_all(dir)?;
    Ok(dir)
}

pub fn cmd_gen(config: &Config) -> Result<i32> {
    let state = config.initial_state()?;
    let dir = output_dir(config)?;
    let path = dir.join("initial.txt");
    checkpoint::write(&path, &state, config.params.sigma, config.gravity())?;
    let report = EnergyReport::compute(&state, config.params.sigma, config.gravity())?;
    println!("wrote {}", path.display());
    print!("{}", output::render_report(&report));
    Ok(EXIT_OK)
}

pub fn cmd_simulate(config: &Config) -> Result<i32> {
    let initial = config.initial_state()?;
    let params = config.sim_params(true)?;
    let dir = output_dir(config)?.to_path_buf();
    let (sigma, gravity) = (params.sigma, config.gravity());
    let mut write_err: Option<Error> = None;
    let write_checkpoints = config.outputs.checkpoints;
    let traj = evolve(initial.clone(), params, "simulate", |cp| {
        if write_checkpoints && write_err.is_none() {
            let path = dir.join(format!("checkpoint_{:06}.txt", cp.step));
            if let Err(e) = checkpoint::write(&path, &cp.state, sigma, gravity) {
                write_err = Some(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e);
    }
    if config.outputs.energy_csv {
        let reports: Vec<EnergyReport> =
            traj.checkpoints.iter().filter_map(|c| c.report.clone()).collect();
        let file = BufWriter::new(File::create(dir.join("energy.csv"))?);
        output::write_energy_csv(file, &reports)?;
    }
    let last = &traj.last_state;
    match &traj.status {
        Status::Completed => {
            let dev = (&last.g - &initial.g).max_abs();
            println!("completed t = {}", checkpoint::fmt_g17(last.t));
            println!("steps = {}", traj.checkpoints.last().map_or(0, |c| c.step));
            println!("final_g_deviation = {}", checkpoint::fmt_g17(dev));
            Ok(EXIT_OK)
        }
        Status::BlowUp { t, quantity } => {
            let path = dir.join("last_state.txt");
            checkpoint::write(&path, last, sigma, gravity)?;
            eprintln!(
                "blow-up abort at t = {t}: quantity {quantity:.6e} exceeds ceiling {:.3e}; last state in {}",
                config.params.blowup_ceiling,
                path.display()
            );
            Ok(EXIT_BLOWUP)
        }
        Status::NumericalFailure { t, reason } => {
            let path = dir.join("last_state.txt");
            checkpoint::write(&path, last, sigma, gravity)?;
            eprintln!("numerical failure at t = {t}: {reason}; last good state in {}", path.display());
            Ok(EXIT_NUMERICAL)
        }
    }
}

pub fn cmd_validate(config: &Config) -> Result<i32> {
    let corrupt = config
        .validate
        .corrupt
        .as_deref()
        .map(str::parse::<Corruption>)
        .transpose()?;
    let checks = validate::run_suite(config.grid.n, 100, corrupt)?;
    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for c in &checks {
        writeln!(out, "{}", c.line())?;
        failed += usize::from(!c.passed());
    }
    writeln!(out, "{} checks, {failed} failed", checks.len())?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VALIDATION })
}

pub fn cmd_study(study: Study, config: &Config) -> Result<i32> {
    let table = study::run(study, config)?;
    let dir = output_dir(config)?;
    let path = dir.join(format!("study_{}.csv", study.name()));
    let file = BufWriter::new(File::create(&path)?);
    output::write_table(file, &table.header, &table.rows)?;
    println!("wrote {}", path.display());
    println!("{}", table.summary);
    Ok(EXIT_OK)
}
