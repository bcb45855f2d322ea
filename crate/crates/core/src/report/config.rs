//! Run configuration: a flat `key = value` file (TOML syntax) plus
//! command-line overrides.
//!
//! ```text
//! # scenario
//! R0 = 100.0
//! r = 10.0
//! VT = 1.0
//! eps = 0.2              # scalar or list
//! n = { from = 2, to = 32, step = 2 }   # scalar, list, or range
//! Rmax = 120.0           # optional common target radius
//!
//! # protocols: one name or a list; all four when absent
//! protocol = "spiral-pincer"
//!
//! # speeds: either absolute ...
//! Vs = [20.0, 30.0]
//! # ... or an excess over a critical speed
//! dV = [1.0, 5.0, 10.0]
//! reference = "own"      # or a protocol name
//! reference_n = 2
//!
//! # simulator
//! bins = 3600
//! dt = 0.001
//! sweeps = 10
//! task = "expansion"     # or "defense"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{ProtocolKind, ScenarioParams};
use crate::simulator::{SimConfig, SimTask};

/// A scalar, a list, or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid<T> {
    One(T),
    Many(Vec<T>),
    Range { from: T, to: T, step: T },
}

impl Grid<u32> {
    pub fn values(&self) -> Result<Vec<u32>> {
        match self {
            Grid::One(v) => Ok(vec![*v]),
            Grid::Many(v) => Ok(v.clone()),
            Grid::Range { from, to, step } => {
                if *step == 0 {
                    return Err(Error::invalid("n", "range step must be positive"));
                }
                Ok((*from..=*to).step_by(*step as usize).collect())
            }
        }
    }
}

impl Grid<f64> {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Grid::One(v) => Ok(vec![*v]),
            Grid::Many(v) => Ok(v.clone()),
            Grid::Range { from, to, step } => {
                if !(*step > 0.0) {
                    return Err(Error::invalid("range", "step must be positive"));
                }
                let count = ((to - from) / step + 1e-9).floor();
                if !(count >= 0.0) || count > 1e6 {
                    return Err(Error::invalid("range", "empty or oversized range"));
                }
                Ok((0..=count as usize).map(|k| from + k as f64 * step).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Protocols {
    One(String),
    Many(Vec<String>),
}

/// The file schema; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "R0")]
    pub r0: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "VT")]
    pub vt: Option<f64>,
    pub n: Option<Grid<u32>>,
    pub eps: Option<Grid<f64>>,
    #[serde(rename = "Rmax")]
    pub rmax: Option<f64>,
    pub protocol: Option<Protocols>,
    #[serde(rename = "Vs")]
    pub vs: Option<Grid<f64>>,
    #[serde(rename = "dV")]
    pub dv: Option<Grid<f64>>,
    pub reference: Option<String>,
    pub reference_n: Option<u32>,
    pub bins: Option<usize>,
    pub dt: Option<f64>,
    pub sweeps: Option<usize>,
    pub task: Option<String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> std::result::Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(LoadError::Config)
    }

    /// Keys set in `other` replace the ones here.
    pub fn overlay(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            r0: other.r0.or(self.r0),
            r: other.r.or(self.r),
            vt: other.vt.or(self.vt),
            n: other.n.or(self.n),
            eps: other.eps.or(self.eps),
            rmax: other.rmax.or(self.rmax),
            protocol: other.protocol.or(self.protocol),
            // An absolute speed on the command line overrides a relative one in the file, and back.
            vs: if other.dv.is_some() { other.vs.clone() } else { other.vs.clone().or(self.vs) },
            dv: if other.vs.is_some() { other.dv } else { other.dv.or(self.dv) },
            reference: other.reference.or(self.reference),
            reference_n: other.reference_n.or(self.reference_n),
            bins: other.bins.or(self.bins),
            dt: other.dt.or(self.dt),
            sweeps: other.sweeps.or(self.sweeps),
            task: other.task.or(self.task),
        }
    }
}

#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Config(Error),
}

/// How the defender speed of a grid point is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpeedMode {
    Absolute,
    /// Excess over the critical speed of the protocol being evaluated.
    DeltaAboveOwnCritical,
    /// Excess over the critical speed of a fixed protocol and team size.
    DeltaAboveReference { protocol: ProtocolKind, n: u32 },
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Base instance; `n` and `eps` are replaced by each grid point.
    pub scenario: ScenarioParams,
    pub n: Vec<u32>,
    pub eps: Vec<f64>,
    pub target_radius: Option<f64>,
    pub protocols: Vec<ProtocolKind>,
    pub speed_mode: SpeedMode,
    /// Absolute speeds or excess speeds, depending on `speed_mode`.
    pub speeds: Vec<f64>,
    pub sim: SimConfig,
}

impl RunConfig {
    pub fn resolve(file: ConfigFile) -> Result<Self> {
        let n = match &file.n {
            Some(g) => g.values()?,
            None => vec![2],
        };
        let eps = match &file.eps {
            Some(g) => g.values()?,
            None => vec![0.2],
        };
        let base = ScenarioParams::new(
            file.r0.unwrap_or(100.0),
            file.r.unwrap_or(10.0),
            file.vt.unwrap_or(1.0),
            n.first().copied().unwrap_or(2),
            eps.first().copied().unwrap_or(0.2),
        )?;
        for &k in &n {
            base.with_n(k).validate()?;
        }
        for &e in &eps {
            base.with_eps(e).validate()?;
        }
        if let Some(t) = file.rmax {
            if !(t.is_finite() && t > base.r0) {
                return Err(Error::invalid("Rmax", "must exceed R0"));
            }
        }
        let protocols = match &file.protocol {
            None => ProtocolKind::ALL.to_vec(),
            Some(Protocols::One(s)) => vec![s.parse()?],
            Some(Protocols::Many(v)) => v.iter().map(|s| s.parse()).collect::<Result<_>>()?,
        };
        let (speed_mode, speeds) = match (&file.vs, &file.dv) {
            (Some(_), Some(_)) => return Err(Error::invalid("Vs", "set either Vs or dV, not both")),
            (Some(g), None) => (SpeedMode::Absolute, g.values()?),
            (None, Some(g)) => {
                let mode = match file.reference.as_deref() {
                    None | Some("own") => SpeedMode::DeltaAboveOwnCritical,
                    Some(name) => {
                        let n_ref = file.reference_n.unwrap_or(2);
                        base.with_n(n_ref).validate()?;
                        SpeedMode::DeltaAboveReference { protocol: name.parse()?, n: n_ref }
                    }
                };
                (mode, g.values()?)
            }
            (None, None) => (SpeedMode::DeltaAboveOwnCritical, vec![10.0 * base.vt]),
        };
        match speed_mode {
            SpeedMode::Absolute if speeds.iter().any(|v| !(v.is_finite() && *v > 0.0)) => {
                return Err(Error::invalid("Vs", "speeds must be positive"));
            }
            SpeedMode::DeltaAboveOwnCritical | SpeedMode::DeltaAboveReference { .. }
                if speeds.iter().any(|v| !(v.is_finite() && *v >= 0.0)) =>
            {
                return Err(Error::invalid("dV", "excess speeds must be non-negative"));
            }
            _ => {}
        }
        let task = match file.task.as_deref() {
            None | Some("expansion") => SimTask::Expansion,
            Some("defense") => SimTask::Defense,
            Some(other) => return Err(Error::invalid("task", format!("unknown task `{other}`"))),
        };
        let defaults = SimConfig::default();
        let sim = SimConfig {
            bins: file.bins.unwrap_or(defaults.bins),
            dt: file.dt,
            sweeps: file.sweeps.unwrap_or(defaults.sweeps),
            task,
        };
        Ok(RunConfig {
            scenario: base,
            n,
            eps,
            target_radius: file.rmax,
            protocols,
            speed_mode,
            speeds,
            sim,
        })
    }
}
