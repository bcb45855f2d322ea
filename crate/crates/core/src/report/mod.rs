//! Parameter-sweep tables behind the `pincer` command-line tool.
//!
//! Every command evaluates its grid points independently (in parallel) and
//! assembles rows in grid order. Per-point failures such as a subcritical
//! speed become a `status` cell; only a failed root search aborts the table.

pub mod config;
pub mod table;

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::universal_lower_bound;
use crate::error::{Error, Result};
use crate::protocol;
use crate::scenario::{ProtocolKind, ScenarioParams};
use crate::simulator;
use crate::spiral_pincer;
use crate::{circular_pincer, same_direction};

pub use config::{ConfigFile, RunConfig, SpeedMode};
pub use table::{Cell, Column, Kind, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CriticalSpeeds,
    MaxRadius,
    SweepCount,
    Schedule,
    Totals,
    Simulate,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::CriticalSpeeds,
        Command::MaxRadius,
        Command::SweepCount,
        Command::Schedule,
        Command::Totals,
        Command::Simulate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CriticalSpeeds => "critical-speeds",
            Command::MaxRadius => "max-radius",
            Command::SweepCount => "sweep-count",
            Command::Schedule => "schedule",
            Command::Totals => "totals",
            Command::Simulate => "simulate",
        }
    }

    pub fn columns(self) -> Vec<Column> {
        use Kind::*;
        let spec: &[(&str, Kind)] = match self {
            Command::CriticalSpeeds => &[
                ("n", Int),
                ("V_LB", Num),
                ("Vc_circular_pincer", Num),
                ("Vc_spiral_pincer", Num),
                ("Vc_circular_same", Num),
                ("Vc_spiral_same", Num),
                ("beta0", Num),
                ("status", Text),
            ],
            Command::MaxRadius => &[
                ("protocol", Text),
                ("n", Int),
                ("Vs", Num),
                ("Vc", Num),
                ("R_asym", Num),
                ("R_asym_alt", Num),
                ("status", Text),
            ],
            Command::SweepCount => &[
                ("protocol", Text),
                ("n", Int),
                ("eps", Num),
                ("Vs", Num),
                ("Vc", Num),
                ("N", Int),
                ("status", Text),
            ],
            Command::Schedule => &[
                ("protocol", Text),
                ("n", Int),
                ("eps", Num),
                ("Vs", Num),
                ("i", Int),
                ("R", Num),
                ("R_tilde", Num),
                ("delta", Num),
                ("delta_eff", Num),
                ("T_sweep", Num),
                ("T_out", Num),
                ("status", Text),
            ],
            Command::Totals => &[
                ("protocol", Text),
                ("n", Int),
                ("eps", Num),
                ("Vs", Num),
                ("Vc", Num),
                ("N", Int),
                ("R_last", Num),
                ("R_max", Num),
                ("R_asym", Num),
                ("T_out", Num),
                ("T_sweep", Num),
                ("T_total", Num),
                ("T_out_last", Num),
                ("status", Text),
            ],
            Command::Simulate => &[
                ("protocol", Text),
                ("n", Int),
                ("Vs", Num),
                ("sweep", Int),
                ("t_start", Num),
                ("t_end", Num),
                ("R", Num),
                ("rho_max_start", Num),
                ("rho_min_end", Num),
                ("rho_max_end", Num),
                ("margin", Num),
                ("breaches", Int),
                ("grid_tolerance", Num),
                ("status", Text),
            ],
        };
        spec.iter().map(|(name, kind)| Column::new(name, *kind)).collect()
    }
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid("command", format!("unknown command `{s}`")))
    }
}

/// Status cell of a grid point that could not be evaluated.
pub fn status_of(err: &Error) -> &'static str {
    match err {
        Error::InvalidParam { .. } => "invalid-param",
        Error::SubcriticalSpeed { .. } => "subcritical-speed",
        Error::NoExpansion { .. } => "no-expansion",
        Error::SpeedTooLow { .. } => "speed-too-low",
        Error::TargetOutOfRange { .. } => "target-out-of-range",
        Error::RootNotFound(_) => "root-not-found",
        Error::SimConfig(_) => "sim-config",
    }
}

/// Errors that abort a whole table rather than one row.
fn is_fatal(err: &Error) -> bool {
    matches!(err, Error::RootNotFound(_) | Error::SimConfig(_))
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy)]
struct Point {
    kind: ProtocolKind,
    params: ScenarioParams,
    /// Configured speed value: absolute or excess, per the speed mode.
    speed: f64,
}

impl RunConfig {
    fn points(&self, with_eps: bool, with_speed: bool) -> Vec<Point> {
        let eps = if with_eps { self.eps.clone() } else { vec![self.scenario.eps] };
        let speeds = if with_speed { self.speeds.clone() } else { vec![f64::NAN] };
        let mut out = Vec::new();
        for &kind in &self.protocols {
            for &n in &self.n {
                for &e in &eps {
                    for &speed in &speeds {
                        out.push(Point {
                            kind,
                            params: self.scenario.with_n(n).with_eps(e),
                            speed,
                        });
                    }
                }
            }
        }
        out
    }

    /// Defender speed of a grid point.
    pub fn speed_for(&self, kind: ProtocolKind, p: &ScenarioParams, value: f64) -> Result<f64> {
        match self.speed_mode {
            SpeedMode::Absolute => Ok(value),
            SpeedMode::DeltaAboveOwnCritical => Ok(protocol::critical_speed(kind, p)? + value),
            SpeedMode::DeltaAboveReference { protocol: reference, n } => {
                Ok(protocol::critical_speed(reference, &p.with_n(n))? + value)
            }
        }
    }

    /// Instance with `eps` replaced so that the expansion stops at the target radius.
    fn targeted(&self, kind: ProtocolKind, p: ScenarioParams, vs: f64) -> Result<ScenarioParams> {
        match self.target_radius {
            None => Ok(p),
            Some(target) => {
                let r_asym = protocol::max_radius(kind, &p, vs)?;
                if !(target < r_asym) {
                    return Err(Error::TargetOutOfRange {
                        target,
                        start: p.r0,
                        asymptote: r_asym,
                    });
                }
                Ok(p.with_eps(r_asym - target))
            }
        }
    }
}

/// Runs `f` over every point in parallel, keeping grid order. `f` renders
/// row-level errors itself, so any error here aborts the table.
fn collect_rows<F>(points: &[Point], f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(&Point) -> Result<Vec<Vec<Cell>>> + Sync,
    F: Send,
{
    let results: Vec<Result<Vec<Vec<Cell>>>> = points.par_iter().map(&f).collect();
    let mut rows = Vec::new();
    for result in results {
        rows.extend(result?);
    }
    Ok(rows)
}

/// Renders a row error as a status row: leading key cells, then empties.
fn error_row(width: usize, keys: Vec<Cell>, err: &Error) -> Result<Vec<Vec<Cell>>> {
    if is_fatal(err) {
        return Err(err.clone());
    }
    let mut row = keys;
    row.resize(width - 1, Cell::Empty);
    row.push(status_of(err).into());
    Ok(vec![row])
}

fn speed_cell(vs: &Result<f64>) -> Cell {
    vs.as_ref().ok().copied().into()
}

pub fn cmd_critical_speeds(cfg: &RunConfig) -> Result<Table> {
    let columns = Command::CriticalSpeeds.columns();
    let width = columns.len();
    let points: Vec<Point> = cfg
        .n
        .iter()
        .map(|&n| Point {
            kind: ProtocolKind::CircularPincer,
            params: cfg.scenario.with_n(n),
            speed: f64::NAN,
        })
        .collect();
    let rows = collect_rows(&points, |pt| {
        let p = &pt.params;
        let eval = || -> Result<Vec<Cell>> {
            let geometry = same_direction::same_direction_geometry(p)?;
            Ok(vec![
                p.n.into(),
                universal_lower_bound(p).into(),
                circular_pincer::critical_speed(p).into(),
                spiral_pincer::critical_speed(p)?.into(),
                geometry.vc_circ_same.into(),
                geometry.vc_spiral_same.into(),
                geometry.beta0.into(),
                "ok".into(),
            ])
        };
        eval().map(|r| vec![r]).or_else(|e| error_row(width, vec![p.n.into()], &e))
    })?;
    Ok(Table { columns, rows })
}

pub fn cmd_max_radius(cfg: &RunConfig) -> Result<Table> {
    let columns = Command::MaxRadius.columns();
    let width = columns.len();
    let rows = collect_rows(&cfg.points(false, true), |pt| {
        let p = &pt.params;
        let vs = cfg.speed_for(pt.kind, p, pt.speed);
        let keys = vec![pt.kind.as_str().into(), p.n.into(), speed_cell(&vs)];
        let eval = || -> Result<Vec<Cell>> {
            let vs = vs.clone()?;
            let vc = protocol::critical_speed(pt.kind, p)?;
            let r_asym = protocol::max_radius(pt.kind, p, vs)?;
            let alt = match pt.kind {
                ProtocolKind::SpiralPincer => Some(spiral_pincer::alternative_max_radius(p, vs)?),
                _ => None,
            };
            Ok(vec![
                pt.kind.as_str().into(),
                p.n.into(),
                vs.into(),
                vc.into(),
                r_asym.into(),
                alt.into(),
                "ok".into(),
            ])
        };
        eval().map(|r| vec![r]).or_else(|e| error_row(width, keys, &e))
    })?;
    Ok(Table { columns, rows })
}

pub fn cmd_sweep_count(cfg: &RunConfig) -> Result<Table> {
    let columns = Command::SweepCount.columns();
    let width = columns.len();
    let rows = collect_rows(&cfg.points(true, true), |pt| {
        let vs = cfg.speed_for(pt.kind, &pt.params, pt.speed);
        let keys = vec![pt.kind.as_str().into(), pt.params.n.into(), pt.params.eps.into(), speed_cell(&vs)];
        let eval = || -> Result<Vec<Cell>> {
            let vs = vs.clone()?;
            let p = cfg.targeted(pt.kind, pt.params, vs)?;
            let vc = protocol::critical_speed(pt.kind, &p)?;
            let count = protocol::sweep_count(pt.kind, &p, vs)?;
            Ok(vec![pt.kind.as_str().into(), p.n.into(), p.eps.into(), vs.into(), vc.into(), count.into(), "ok".into()])
        };
        eval().map(|r| vec![r]).or_else(|e| error_row(width, keys, &e))
    })?;
    Ok(Table { columns, rows })
}

pub fn cmd_schedule(cfg: &RunConfig) -> Result<Table> {
    let columns = Command::Schedule.columns();
    let width = columns.len();
    let rows = collect_rows(&cfg.points(true, true), |pt| {
        let vs = cfg.speed_for(pt.kind, &pt.params, pt.speed);
        let keys = vec![pt.kind.as_str().into(), pt.params.n.into(), pt.params.eps.into(), speed_cell(&vs)];
        let eval = || -> Result<Vec<Vec<Cell>>> {
            let vs = vs.clone()?;
            let p = cfg.targeted(pt.kind, pt.params, vs)?;
            let steps = protocol::expansion_schedule(pt.kind, &p, vs)?;
            Ok(steps
                .iter()
                .map(|s| {
                    vec![
                        pt.kind.as_str().into(),
                        p.n.into(),
                        p.eps.into(),
                        vs.into(),
                        s.index.into(),
                        s.radius.into(),
                        s.radius_tilde.into(),
                        s.delta.into(),
                        s.delta_eff.into(),
                        s.t_sweep.into(),
                        s.t_out.into(),
                        "ok".into(),
                    ]
                })
                .collect())
        };
        eval().or_else(|e| error_row(width, keys, &e))
    })?;
    Ok(Table { columns, rows })
}

pub fn cmd_totals(cfg: &RunConfig) -> Result<Table> {
    let columns = Command::Totals.columns();
    let width = columns.len();
    let rows = collect_rows(&cfg.points(true, true), |pt| {
        let vs = cfg.speed_for(pt.kind, &pt.params, pt.speed);
        let keys = vec![pt.kind.as_str().into(), pt.params.n.into(), pt.params.eps.into(), speed_cell(&vs)];
        let eval = || -> Result<Vec<Cell>> {
            let vs = vs.clone()?;
            let p = cfg.targeted(pt.kind, pt.params, vs)?;
            let vc = protocol::critical_speed(pt.kind, &p)?;
            let s = protocol::totals(pt.kind, &p, vs)?;
            Ok(vec![
                pt.kind.as_str().into(),
                p.n.into(),
                p.eps.into(),
                vs.into(),
                vc.into(),
                s.sweeps.into(),
                s.r_last.into(),
                s.r_max.into(),
                s.r_asym.into(),
                s.t_out_total.into(),
                s.t_sweep_total.into(),
                s.t_total.into(),
                s.t_out_last.into(),
                "ok".into(),
            ])
        };
        eval().map(|r| vec![r]).or_else(|e| error_row(width, keys, &e))
    })?;
    Ok(Table { columns, rows })
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Table> {
    let columns = Command::Simulate.columns();
    let width = columns.len();
    let rows = collect_rows(&cfg.points(false, true), |pt| {
        let p = &pt.params;
        let vs = cfg.speed_for(pt.kind, p, pt.speed);
        let keys = vec![pt.kind.as_str().into(), p.n.into(), speed_cell(&vs)];
        let eval = || -> Result<Vec<Vec<Cell>>> {
            let vs = vs.clone()?;
            let rep = simulator::run(p, vs, pt.kind, &cfg.sim)?;
            let status = if rep.center_reached { "center-reached" } else { "ok" };
            Ok(rep
                .sweeps
                .iter()
                .map(|s| {
                    vec![
                        pt.kind.as_str().into(),
                        p.n.into(),
                        vs.into(),
                        s.index.into(),
                        s.t_start.into(),
                        s.t_end.into(),
                        s.radius.into(),
                        s.rho_max_start.into(),
                        s.rho_min_end.into(),
                        s.rho_max_end.into(),
                        s.margin.into(),
                        s.breaches.into(),
                        rep.grid_tolerance.into(),
                        status.into(),
                    ]
                })
                .collect())
        };
        eval().or_else(|e| error_row(width, keys, &e))
    })?;
    Ok(Table { columns, rows })
}

pub fn run_command(cmd: Command, cfg: &RunConfig) -> Result<Table> {
    match cmd {
        Command::CriticalSpeeds => cmd_critical_speeds(cfg),
        Command::MaxRadius => cmd_max_radius(cfg),
        Command::SweepCount => cmd_sweep_count(cfg),
        Command::Schedule => cmd_schedule(cfg),
        Command::Totals => cmd_totals(cfg),
        Command::Simulate => cmd_simulate(cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Sidecar describing how a table was produced.
pub fn metadata(cmd: Command, cfg: &RunConfig, table: &Table, format: Format) -> String {
    let meta = serde_json::json!({
        "tool": "pincer",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cmd.name(),
        "format": format,
        "config": cfg,
        "columns": table.columns,
        "rows": table.rows.len(),
    });
    let mut s = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    s.push('\n');
    s
}

pub fn render(table: &Table, format: Format) -> std::result::Result<String, table::TableError> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

/// Path of the metadata sidecar of an output file.
pub fn meta_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    out.with_file_name(name)
}

/// Reads a table written by [`render`], using the columns from its sidecar.
pub fn read_table(text: &str, meta: &str) -> std::result::Result<Table, table::TableError> {
    let meta: serde_json::Value = serde_json::from_str(meta)?;
    let columns: Vec<Column> = serde_json::from_value(meta["columns"].clone())?;
    if meta["format"] == "json" {
        Table::from_json(text)
    } else {
        Table::from_csv(text, &columns)
    }
}
