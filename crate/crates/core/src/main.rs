use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pincer_defense::report::config::{ConfigFile, Grid, LoadError, Protocols};
use pincer_defense::report::{self, Command, Format, RunConfig};
use pincer_defense::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "pincer", version, about = "Critical speeds, expansion schedules and simulations of pincer defense sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Critical speeds of all protocols and the universal lower bound, per team size.
    CriticalSpeeds(Opts),
    /// Asymptotic protected radius.
    MaxRadius(Opts),
    /// Number of sweeps of the maximal expansion task.
    SweepCount(Opts),
    /// Per-sweep expansion schedule.
    Schedule(Opts),
    /// Total outward, sweep and overall expansion times.
    Totals(Opts),
    /// Per-sweep records of the wavefront simulator.
    Simulate(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Opts {
    /// Config file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent. A `.meta.json` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long = "R0")]
    r0: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long = "VT")]
    vt: Option<f64>,
    /// Team sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Absolute defender speeds.
    #[arg(long = "Vs", value_delimiter = ',', conflicts_with = "dv")]
    vs: Option<Vec<f64>>,
    /// Speeds above a critical speed.
    #[arg(long = "dV", value_delimiter = ',')]
    dv: Option<Vec<f64>>,
    /// Reference protocol of `--dV` (`own` or a protocol name).
    #[arg(long)]
    reference: Option<String>,
    #[arg(long)]
    reference_n: Option<u32>,
    /// Common target radius of the expansion task.
    #[arg(long = "Rmax")]
    rmax: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    protocol: Option<Vec<String>>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    sweeps: Option<usize>,
    /// Simulator task: `expansion` or `defense`.
    #[arg(long)]
    task: Option<String>,
}

impl Opts {
    fn overrides(&self) -> ConfigFile {
        let many = |v: &Option<Vec<f64>>| v.clone().map(Grid::Many);
        ConfigFile {
            r0: self.r0,
            r: self.r,
            vt: self.vt,
            n: self.n.clone().map(Grid::Many),
            eps: many(&self.eps),
            rmax: self.rmax,
            protocol: self.protocol.clone().map(Protocols::Many),
            vs: many(&self.vs),
            dv: many(&self.dv),
            reference: self.reference.clone(),
            reference_n: self.reference_n,
            bins: self.bins,
            dt: self.dt,
            sweeps: self.sweeps,
            task: self.task.clone(),
        }
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("pincer: {msg}");
    ExitCode::from(code)
}

fn error_code(err: &Error) -> u8 {
    match err {
        Error::RootNotFound(_) => EXIT_NUMERIC,
        _ => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, opts) = match &cli.command {
        Cmd::CriticalSpeeds(o) => (Command::CriticalSpeeds, o),
        Cmd::MaxRadius(o) => (Command::MaxRadius, o),
        Cmd::SweepCount(o) => (Command::SweepCount, o),
        Cmd::Schedule(o) => (Command::Schedule, o),
        Cmd::Totals(o) => (Command::Totals, o),
        Cmd::Simulate(o) => (Command::Simulate, o),
    };
    let file = match &opts.config {
        None => ConfigFile::default(),
        Some(path) => match ConfigFile::load(path) {
            Ok(f) => f,
            Err(LoadError::Io(msg)) => return fail(EXIT_IO, msg),
            Err(LoadError::Config(e)) => return fail(EXIT_CONFIG, e),
        },
    };
    let cfg = match RunConfig::resolve(file.overlay(opts.overrides())) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let table = match report::run_command(cmd, &cfg) {
        Ok(t) => t,
        Err(e) => return fail(error_code(&e), e),
    };
    let format = match opts.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let text = match report::render(&table, format) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_IO, e),
    };
    match &opts.out {
        None => print!("{text}"),
        Some(path) => {
            let meta = report::metadata(cmd, &cfg, &table, format);
            if let Err(e) = std::fs::write(path, text).and_then(|_| std::fs::write(report::meta_path(path), meta)) {
                return fail(EXIT_IO, format!("{}: {e}", path.display()));
            }
        }
    }
    ExitCode::SUCCESS
}
