//! Same-direction baselines: all defenders sweep the same way around the
//! region. The circular variant pays an extra `VT` in critical speed; the
//! spiral variant must guard an extra sector `β0` per sweep.
//!
//! The expansion schedules here are derived baselines for comparison only.
//! Their budgets vanish exactly at the respective critical speeds and they
//! reuse the pincer outward-advance kinematics. Totals come from direct
//! summation.

use crate::circular_pincer;
use crate::error::{Error, Result};
use crate::protocol::{build_schedule, defense_schedule, regime, require_expansion, summarize, target_radius, Regime};
use crate::rootfind::{self, RootProblem};
use crate::scenario::{ExpansionStep, ProtocolKind, ProtocolSummary, ScenarioParams};
use crate::spiral_pincer::{self, interior_guess, speed_bracket};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SameDirectionGeometry {
    /// Extra guarded sector at `R0` and the spiral same-direction critical speed.
    pub beta0: f64,
    pub vc_circ_same: f64,
    pub vc_spiral_same: f64,
}

/// `2π·R0·VT/(n·r) + VT`.
pub fn circular_same_critical_speed(p: &ScenarioParams) -> f64 {
    circular_pincer::critical_speed(p) + p.vt
}

/// Extra sector a spiral same-direction sweeper must cover at radius `radius`.
pub fn beta0(p: &ScenarioParams, vs: f64, radius: f64) -> f64 {
    (2.0 * p.r * vs / ((vs + p.vt) * (radius + 2.0 * p.r))).asin()
}

/// `1 − exp(−VT·span/√(Vs² − VT²))` for the widened sweep at `radius`.
fn contraction(p: &ScenarioParams, vs: f64, radius: f64) -> f64 {
    let span = p.sector() + beta0(p, vs, radius);
    1.0 - (-span * p.vt / (vs * vs - p.vt * p.vt).sqrt()).exp()
}

/// `2r·Vs/(Vs + VT) − (R0 + r)(1 − exp(−(2π/n + β0)·VT/√(Vs² − VT²)))`,
/// increasing in `Vs`, zero at the critical speed.
pub fn spiral_same_objective(p: &ScenarioParams, vs: f64) -> f64 {
    2.0 * p.r * vs / (vs + p.vt) - (p.r0 + p.r) * contraction(p, vs, p.r0)
}

/// Slowest speed at which the spiral same-direction sweep holds `R0`. The
/// search starts from the spiral pincer critical speed, where the objective
/// is negative.
pub fn spiral_same_critical_speed(p: &ScenarioParams) -> Result<f64> {
    let lo = spiral_pincer::critical_speed(p)?;
    let (_, hi) = speed_bracket(p);
    let guess = interior_guess(lo, lo, hi);
    let problem = RootProblem::new(|vs| spiral_same_objective(p, vs), lo, hi, guess, p.r);
    Ok(rootfind::solve(&problem)?)
}

pub fn same_direction_geometry(p: &ScenarioParams) -> Result<SameDirectionGeometry> {
    let vc_spiral_same = spiral_same_critical_speed(p)?;
    Ok(SameDirectionGeometry {
        beta0: beta0(p, vc_spiral_same, p.r0),
        vc_circ_same: circular_same_critical_speed(p),
        vc_spiral_same,
    })
}

fn check_kind(kind: ProtocolKind) -> Result<()> {
    if kind.is_pincer() {
        return Err(Error::invalid("protocol", format!("{kind} is not a same-direction protocol")));
    }
    Ok(())
}

fn critical(p: &ScenarioParams, kind: ProtocolKind) -> Result<f64> {
    match kind {
        ProtocolKind::CircularSameDirection => Ok(circular_same_critical_speed(p)),
        _ => spiral_same_critical_speed(p),
    }
}

/// Sweep time and raw budget at `radius`.
pub fn sweep_model(p: &ScenarioParams, vs: f64, kind: ProtocolKind, radius: f64) -> (f64, f64) {
    match kind {
        ProtocolKind::CircularSameDirection => {
            let t = circular_pincer::sweep_time(p, vs, radius);
            (t, p.r * (vs - p.vt) / vs - p.vt * t)
        }
        _ => {
            let t = (radius + p.r) * contraction(p, vs, radius) / p.vt;
            (t, 2.0 * p.r * vs / (vs + p.vt) - p.vt * t)
        }
    }
}

fn asymptote(p: &ScenarioParams, vs: f64, kind: ProtocolKind) -> Result<f64> {
    match kind {
        ProtocolKind::CircularSameDirection => {
            Ok(p.n_f64() * p.r * (vs - p.vt) / (std::f64::consts::TAU * p.vt))
        }
        _ => {
            let budget = |radius: f64| sweep_model(p, vs, kind, radius).1;
            let hi = 2.0 * p.r / (1.0 - spiral_pincer::lambda(p, vs)) - p.r;
            let problem = RootProblem::new(budget, p.r0, hi, 0.5 * (p.r0 + hi), p.r);
            Ok(rootfind::solve(&problem)?)
        }
    }
}

/// Radius at which the budget vanishes.
pub fn max_radius_same(p: &ScenarioParams, vs: f64, kind: ProtocolKind) -> Result<f64> {
    check_kind(kind)?;
    match regime(p, vs, critical(p, kind)?)? {
        Regime::Critical => Ok(p.r0),
        Regime::Above => asymptote(p, vs, kind),
    }
}

/// Schedule and summed totals. At the critical speed the schedule is the
/// one-sweep defense task with a zero budget.
pub fn expansion_schedule_same(
    p: &ScenarioParams,
    vs: f64,
    kind: ProtocolKind,
) -> Result<(Vec<ExpansionStep>, ProtocolSummary)> {
    check_kind(kind)?;
    if regime(p, vs, critical(p, kind)?)? == Regime::Critical {
        let (t0, delta) = sweep_model(p, vs, kind, p.r0);
        let steps = defense_schedule(p, t0, delta);
        let summary = summarize(&steps, p.r0, p.r0);
        return Ok((steps, summary));
    }
    let r_asym = asymptote(p, vs, kind)?;
    let target = target_radius(p, r_asym)?;
    let steps = build_schedule(p.r0, target, vs, p.vt, p.r, None, |radius| {
        sweep_model(p, vs, kind, radius)
    });
    let summary = summarize(&steps, r_asym, target);
    Ok((steps, summary))
}

/// Like [`expansion_schedule_same`], but the critical speed is an error.
pub fn totals_same(p: &ScenarioParams, vs: f64, kind: ProtocolKind) -> Result<ProtocolSummary> {
    check_kind(kind)?;
    require_expansion(p, vs, critical(p, kind)?)?;
    expansion_schedule_same(p, vs, kind).map(|(_, s)| s)
}
