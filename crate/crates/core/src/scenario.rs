//! Domain types shared by every protocol.
//!
//! Lengths share one unit and speeds are length per unit time. Nothing here
//! models individual invaders: the adversary only ever appears as a worst-case
//! wavefront moving inward at `vt`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A static problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    /// Initial protected radius `R0`.
    pub r0: f64,
    /// Sensor half-length; the full sensor is `2r`.
    pub r: f64,
    /// Maximal invader speed `VT`.
    pub vt: f64,
    /// Number of defenders, even.
    pub n: u32,
    /// Stopping gap below the asymptotic radius during maximal expansion.
    pub eps: f64,
}

impl ScenarioParams {
    /// Builds and validates an instance.
    pub fn new(r0: f64, r: f64, vt: f64, n: u32, eps: f64) -> Result<Self> {
        ScenarioParams { r0, r, vt, n, eps }.validate()
    }

    /// Returns the parameters unchanged if every invariant holds.
    ///
    /// `r` must stay strictly below `R0`: the spiral protocol takes
    /// `ln((R0 + r) / (R0 - r))`.
    pub fn validate(self) -> Result<Self> {
        for (field, value) in [
            ("R0", self.r0),
            ("r", self.r),
            ("VT", self.vt),
            ("eps", self.eps),
        ] {
            if !value.is_finite() {
                return Err(Error::invalid(field, "must be finite"));
            }
            if value <= 0.0 {
                return Err(Error::invalid(field, "must be positive"));
            }
        }
        if self.n < 2 {
            return Err(Error::invalid("n", "at least two defenders are required"));
        }
        if !self.n.is_multiple_of(2) {
            return Err(Error::invalid("n", "must be even"));
        }
        if self.r >= self.r0 {
            return Err(Error::invalid("r", "r must be < R0"));
        }
        Ok(self)
    }

    pub fn with_n(self, n: u32) -> Self {
        ScenarioParams { n, ..self }
    }

    pub fn with_eps(self, eps: f64) -> Self {
        ScenarioParams { eps, ..self }
    }

    /// Angular sector allotted to one defender, `2π/n`.
    pub fn sector(&self) -> f64 {
        std::f64::consts::TAU / f64::from(self.n)
    }

    pub(crate) fn n_f64(&self) -> f64 {
        f64::from(self.n)
    }

    pub(crate) fn check_speed(&self, vs: f64) -> Result<()> {
        if !vs.is_finite() || vs <= self.vt {
            return Err(Error::SpeedTooLow {
                speed: vs,
                invader_speed: self.vt,
            });
        }
        Ok(())
    }
}

/// Defender speed bookkeeping for one protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedSpec {
    /// Defender speed at the sensor center.
    pub vs: f64,
    /// Excess over the protocol's critical speed.
    pub dv: f64,
    /// Protocol critical speed.
    pub vc: f64,
    /// Universal lower bound.
    pub vlb: f64,
}

impl SpeedSpec {
    pub fn above_critical(vc: f64, dv: f64, vlb: f64) -> Result<Self> {
        if dv < 0.0 || !dv.is_finite() {
            return Err(Error::invalid("dV", "excess speed must be non-negative"));
        }
        Ok(SpeedSpec {
            vs: vc + dv,
            dv,
            vc,
            vlb,
        })
    }
}

/// Coefficients of the affine radius recursion `x' = c2·x + c1` and of the
/// matching sweep-time recursion `T' = c2·T + c3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecursionCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl RecursionCoeffs {
    /// Limit of the radius recursion, `c1 / (1 - c2)`.
    pub fn fixed_point(&self) -> f64 {
        self.c1 / (1.0 - self.c2)
    }

    pub fn is_contraction(&self) -> bool {
        self.c1 > 0.0 && self.c3 > 0.0 && self.c2 > 0.0 && self.c2 < 1.0
    }
}

/// One sweep of the maximal expansion task.
///
/// Step `i` sweeps at radius `radius`, then advances outward by `delta_eff`.
/// The final step of a schedule is truncated: its advance stops exactly at
/// the target radius, so `delta_eff` and `t_out` there are the last outward
/// advancement rather than the full budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionStep {
    pub index: usize,
    /// Protected radius `R_i` at the start of the sweep.
    pub radius: f64,
    /// `R_i + r` (spiral bookkeeping; equal to `radius + r` for every protocol).
    pub radius_tilde: f64,
    /// Raw advance budget `δ_i`.
    pub delta: f64,
    /// Distance actually advanced after the sweep.
    pub delta_eff: f64,
    pub t_sweep: f64,
    pub t_out: f64,
}

/// Aggregate results of the maximal expansion task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSummary {
    /// Number of sweeps `N_n`.
    pub sweeps: u64,
    /// Radius of the last sweep, `R_{N-1}`.
    pub r_last: f64,
    /// Final protected radius, `R_asym - eps`.
    pub r_max: f64,
    /// Asymptotic radius of the recursion.
    pub r_asym: f64,
    /// All outward advancement time, including the last advancement.
    pub t_out_total: f64,
    pub t_sweep_total: f64,
    pub t_total: f64,
    pub t_out_last: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    CircularPincer,
    SpiralPincer,
    CircularSameDirection,
    SpiralSameDirection,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 4] = [
        ProtocolKind::CircularPincer,
        ProtocolKind::SpiralPincer,
        ProtocolKind::CircularSameDirection,
        ProtocolKind::SpiralSameDirection,
    ];

    pub fn is_pincer(self) -> bool {
        matches!(self, ProtocolKind::CircularPincer | ProtocolKind::SpiralPincer)
    }

    pub fn is_spiral(self) -> bool {
        matches!(
            self,
            ProtocolKind::SpiralPincer | ProtocolKind::SpiralSameDirection
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolKind::CircularPincer => "circular-pincer",
            ProtocolKind::SpiralPincer => "spiral-pincer",
            ProtocolKind::CircularSameDirection => "circular-same",
            ProtocolKind::SpiralSameDirection => "spiral-same",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "circular-pincer" | "circular" => Ok(ProtocolKind::CircularPincer),
            "spiral-pincer" | "spiral" => Ok(ProtocolKind::SpiralPincer),
            "circular-same" | "circular-same-direction" => Ok(ProtocolKind::CircularSameDirection),
            "spiral-same" | "spiral-same-direction" => Ok(ProtocolKind::SpiralSameDirection),
            other => Err(Error::invalid(
                "protocol",
                format!("unknown protocol `{other}`"),
            )),
        }
    }
}
