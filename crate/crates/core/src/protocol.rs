//! Uniform entry points over the four protocols, plus the schedule builder
//! they share.

use crate::error::{Error, Result};
use crate::scenario::{ExpansionStep, ProtocolKind, ProtocolSummary, ScenarioParams};
use crate::{circular_pincer, same_direction, spiral_pincer};

/// Speeds within this relative distance of a critical speed count as critical.
pub const CRITICAL_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Regime {
    /// Exactly critical: the region is held but cannot grow.
    Critical,
    Above,
}

pub(crate) fn regime(p: &ScenarioParams, vs: f64, vc: f64) -> Result<Regime> {
    p.check_speed(vs)?;
    if (vs - vc).abs() <= CRITICAL_REL_TOL * vc {
        Ok(Regime::Critical)
    } else if vs < vc {
        Err(Error::SubcriticalSpeed {
            speed: vs,
            critical: vc,
        })
    } else {
        Ok(Regime::Above)
    }
}

pub(crate) fn require_expansion(p: &ScenarioParams, vs: f64, vc: f64) -> Result<()> {
    match regime(p, vs, vc)? {
        Regime::Critical => Err(Error::NoExpansion { speed: vs }),
        Regime::Above => Ok(()),
    }
}

/// `R_asym - eps`, checked to lie strictly above `R0`.
pub(crate) fn target_radius(p: &ScenarioParams, r_asym: f64) -> Result<f64> {
    let target = r_asym - p.eps;
    if !(target > p.r0) {
        return Err(Error::TargetOutOfRange {
            target,
            start: p.r0,
            asymptote: r_asym,
        });
    }
    Ok(target)
}

/// Builds an expansion schedule from a per-sweep model.
///
/// `sweep(R)` returns the sweep time and raw budget at radius `R`. With
/// `count = Some(N)` exactly `N` steps are produced; with `None` steps are
/// added until the next radius would reach `target`. The last advance always
/// stops at `target`.
pub(crate) fn build_schedule(
    start: f64,
    target: f64,
    vs: f64,
    vt: f64,
    r_offset: f64,
    count: Option<u64>,
    sweep: impl Fn(f64) -> (f64, f64),
) -> Vec<ExpansionStep> {
    let mut steps = Vec::new();
    let mut radius = start;
    let mut index = 0usize;
    loop {
        let (t_sweep, delta) = sweep(radius);
        let full = delta * vs / (vs + vt);
        let last = match count {
            Some(n) => index as u64 + 1 >= n,
            None => radius + full >= target || full <= 0.0,
        };
        let delta_eff = if last { (target - radius).max(0.0) } else { full };
        steps.push(ExpansionStep {
            index,
            radius,
            radius_tilde: radius + r_offset,
            delta,
            delta_eff,
            t_sweep,
            t_out: delta_eff / vs,
        });
        if last {
            return steps;
        }
        radius += delta_eff;
        index += 1;
    }
}

/// Degenerate schedule of the defense task: one sweep at `R0`, no advance.
pub(crate) fn defense_schedule(p: &ScenarioParams, t_sweep: f64, delta: f64) -> Vec<ExpansionStep> {
    vec![ExpansionStep {
        index: 0,
        radius: p.r0,
        radius_tilde: p.r0 + p.r,
        delta,
        delta_eff: 0.0,
        t_sweep,
        t_out: 0.0,
    }]
}

/// Totals by direct summation over a schedule.
pub fn summarize(steps: &[ExpansionStep], r_asym: f64, r_max: f64) -> ProtocolSummary {
    let t_out_total: f64 = steps.iter().map(|s| s.t_out).sum();
    let t_sweep_total: f64 = steps.iter().map(|s| s.t_sweep).sum();
    let last = steps.last();
    ProtocolSummary {
        sweeps: steps.len() as u64,
        r_last: last.map_or(r_max, |s| s.radius),
        r_max,
        r_asym,
        t_out_total,
        t_sweep_total,
        t_total: t_out_total + t_sweep_total,
        t_out_last: last.map_or(0.0, |s| s.t_out),
    }
}

pub fn critical_speed(kind: ProtocolKind, p: &ScenarioParams) -> Result<f64> {
    match kind {
        ProtocolKind::CircularPincer => Ok(circular_pincer::critical_speed(p)),
        ProtocolKind::SpiralPincer => spiral_pincer::critical_speed(p),
        ProtocolKind::CircularSameDirection => Ok(same_direction::circular_same_critical_speed(p)),
        ProtocolKind::SpiralSameDirection => same_direction::spiral_same_critical_speed(p),
    }
}

/// Asymptotic radius of the expansion recursion.
pub fn max_radius(kind: ProtocolKind, p: &ScenarioParams, vs: f64) -> Result<f64> {
    match kind {
        ProtocolKind::CircularPincer => circular_pincer::max_radius(p, vs),
        ProtocolKind::SpiralPincer => spiral_pincer::max_radius(p, vs),
        _ => same_direction::max_radius_same(p, vs, kind),
    }
}

pub fn sweep_count(kind: ProtocolKind, p: &ScenarioParams, vs: f64) -> Result<u64> {
    match kind {
        ProtocolKind::CircularPincer => circular_pincer::sweep_count(p, vs),
        ProtocolKind::SpiralPincer => spiral_pincer::sweep_count(p, vs),
        _ => same_direction::totals_same(p, vs, kind).map(|s| s.sweeps),
    }
}

pub fn expansion_schedule(kind: ProtocolKind, p: &ScenarioParams, vs: f64) -> Result<Vec<ExpansionStep>> {
    match kind {
        ProtocolKind::CircularPincer => circular_pincer::expansion_schedule(p, vs),
        ProtocolKind::SpiralPincer => spiral_pincer::expansion_schedule(p, vs),
        _ => same_direction::expansion_schedule_same(p, vs, kind).map(|(steps, _)| steps),
    }
}

pub fn totals(kind: ProtocolKind, p: &ScenarioParams, vs: f64) -> Result<ProtocolSummary> {
    match kind {
        ProtocolKind::CircularPincer => circular_pincer::totals(p, vs),
        ProtocolKind::SpiralPincer => spiral_pincer::totals(p, vs),
        _ => same_direction::totals_same(p, vs, kind),
    }
}
