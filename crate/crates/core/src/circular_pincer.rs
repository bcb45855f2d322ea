//! Circular pincer sweep: pairs of defenders sweep arcs at a constant radius,
//! meet, reverse, and advance outward between sweeps.

use std::f64::consts::TAU;

use crate::bounds::universal_lower_bound;
use crate::error::Result;
use crate::protocol::{build_schedule, defense_schedule, regime, require_expansion, target_radius, Regime};
use crate::recurrence::{pow, Affine};
use crate::scenario::{ExpansionStep, ProtocolSummary, RecursionCoeffs, ScenarioParams};

/// `Vc = 2π·R0·VT/(n·r)`, twice the universal lower bound.
pub fn critical_speed(p: &ScenarioParams) -> f64 {
    2.0 * universal_lower_bound(p)
}

pub(crate) fn raw_coeffs(p: &ScenarioParams, vs: f64) -> RecursionCoeffs {
    let (r, vt, n) = (p.r, p.vt, p.n_f64());
    RecursionCoeffs {
        c1: r * vs / (vs + vt),
        c2: 1.0 - TAU * vt / (n * (vs + vt)),
        c3: TAU * r / (n * (vs + vt)),
    }
}

/// Coefficients of `R' = c2·R + c1` and `T' = c2·T + c3`.
pub fn coeffs(p: &ScenarioParams, vs: f64) -> Result<RecursionCoeffs> {
    regime(p, vs, critical_speed(p))?;
    Ok(raw_coeffs(p, vs))
}

/// `n·Vs·r/(2π·VT)`, the largest radius `n` circular sweepers can hold.
pub fn max_radius(p: &ScenarioParams, vs: f64) -> Result<f64> {
    regime(p, vs, critical_speed(p))?;
    Ok(asymptote(p, vs))
}

fn asymptote(p: &ScenarioParams, vs: f64) -> f64 {
    p.n_f64() * vs * p.r / (TAU * p.vt)
}

pub fn sweep_time(p: &ScenarioParams, vs: f64, radius: f64) -> f64 {
    TAU * radius / (p.n_f64() * vs)
}

/// Number of sweeps `N_n` needed to come within `eps` of the asymptote.
pub fn sweep_count(p: &ScenarioParams, vs: f64) -> Result<u64> {
    require_expansion(p, vs, critical_speed(p))?;
    let target = target_radius(p, asymptote(p, vs))?;
    let c = raw_coeffs(p, vs);
    Ok(Affine::new(c.c1, c.c2).count_to_reach(p.r0, target).max(1))
}

/// Per-sweep radii, budgets and times. At the critical speed this is the
/// one-sweep defense task with a zero budget.
pub fn expansion_schedule(p: &ScenarioParams, vs: f64) -> Result<Vec<ExpansionStep>> {
    if regime(p, vs, critical_speed(p))? == Regime::Critical {
        let t0 = sweep_time(p, vs, p.r0);
        return Ok(defense_schedule(p, t0, (p.r - p.vt * t0).max(0.0)));
    }
    let count = sweep_count(p, vs)?;
    let target = target_radius(p, asymptote(p, vs))?;
    Ok(build_schedule(p.r0, target, vs, p.vt, p.r, Some(count), |radius| {
        let t = sweep_time(p, vs, radius);
        (t, p.r - p.vt * t)
    }))
}

/// Totals of the maximal expansion task from the closed forms.
pub fn totals(p: &ScenarioParams, vs: f64) -> Result<ProtocolSummary> {
    let count = sweep_count(p, vs)?;
    let r_asym = asymptote(p, vs);
    let r_max = r_asym - p.eps;
    let r_last = closed_form::last_radius(p, vs, count);
    let t_out_total = closed_form::out_time_total(p, vs);
    let t_sweep_total = closed_form::sweep_time_total(p, vs, count);
    Ok(ProtocolSummary {
        sweeps: count,
        r_last,
        r_max,
        r_asym,
        t_out_total,
        t_sweep_total,
        t_total: t_out_total + t_sweep_total,
        t_out_last: (r_max - r_last) / vs,
    })
}

/// Closed forms of the geometric series behind the schedule. `count` is the
/// number of sweeps `N`; none of these check the speed regime.
pub mod closed_form {
    use super::*;

    fn c2(p: &ScenarioParams, vs: f64) -> f64 {
        raw_coeffs(p, vs).c2
    }

    /// `2π·R0·VT − n·Vs·r`, negative above the critical speed.
    fn gap(p: &ScenarioParams, vs: f64) -> f64 {
        TAU * p.r0 * p.vt - p.n_f64() * vs * p.r
    }

    /// `R_{N-1}`.
    pub fn last_radius(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        asymptote(p, vs) + pow(c2(p, vs), count - 1) * gap(p, vs) / (TAU * p.vt)
    }

    /// `T_{N-1}`, duration of the last sweep.
    pub fn last_sweep_time(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        p.r / p.vt + pow(c2(p, vs), count - 1) * gap(p, vs) / (p.n_f64() * vs * p.vt)
    }

    /// Total sweep time, fully expanded.
    pub fn sweep_time_total(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let (r0, r, vt, n) = (p.r0, p.r, p.vt, p.n_f64());
        r0 * (vs + vt) / (vs * vt) - r * n * (vs + vt) / (TAU * vt * vt)
            - pow(c2(p, vs), count) * gap(p, vs) / (vs * vt) * (vs + vt) / (TAU * vt)
            + count as f64 * r / vt
    }

    /// Total sweep time as `(T0 − c2·T_{N−1} + (N−1)·c3)/(1 − c2)`.
    pub fn sweep_time_total_general(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let c = raw_coeffs(p, vs);
        let t0 = sweep_time(p, vs, p.r0);
        (t0 - c.c2 * last_sweep_time(p, vs, count) + (count - 1) as f64 * c.c3) / (1.0 - c.c2)
    }

    /// Outward time up to `R_{N-1}`, excluding the last advance.
    pub fn out_time_partial(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let (r0, r, vt, n) = (p.r0, p.r, p.vt, p.n_f64());
        -r0 / vs + n * r / (TAU * vt) + pow(c2(p, vs), count - 1) * gap(p, vs) / (TAU * vt * vs)
    }

    /// All outward time, including the last advance to `R_asym − eps`.
    pub fn out_time_total(p: &ScenarioParams, vs: f64) -> f64 {
        p.n_f64() * p.r / (TAU * p.vt) - (p.r0 + p.eps) / vs
    }
}
