//! Spiral pincer sweep: the sensor center follows a logarithmic spiral that
//! keeps the inner tip on the inward-moving wavefront, so every sweep ends
//! with a smaller but still circular protected region.
//!
//! The expansion recursion is linear in `R̃ = R + r`, the radius of the sensor
//! center at the start of a sweep.

use std::f64::consts::TAU;

use crate::bounds::universal_lower_bound;
use crate::circular_pincer;
use crate::error::Result;
use crate::protocol::{build_schedule, defense_schedule, regime, require_expansion, target_radius, Regime};
use crate::recurrence::{pow, Affine};
use crate::rootfind::{self, RootProblem};
use crate::scenario::{ExpansionStep, ProtocolSummary, RecursionCoeffs, ScenarioParams};

/// Speed-dependent constants of the spiral trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralGeometry {
    pub vs: f64,
    pub vt: f64,
    /// Angle between the defender velocity and the region normal, `asin(VT/Vs)`.
    pub phi: f64,
    /// Radial contraction of the sensor center over one sector, `exp(−2π·VT/(n·√(Vs²−VT²)))`.
    pub lambda: f64,
    /// Duration of the first sweep, `(R0 + r)(1 − λ)/VT`.
    pub tc: f64,
    /// Angular span of one sweep, `2π/n`.
    pub span: f64,
}

impl SpiralGeometry {
    /// `√(Vs² − VT²)`, the tangential speed component.
    pub fn tangential_speed(&self) -> f64 {
        (self.vs * self.vs - self.vt * self.vt).sqrt()
    }

    /// Polar angle covered after time `t` on a spiral that starts at radius `r_start`.
    pub fn angle_at(&self, r_start: f64, t: f64) -> f64 {
        -(self.tangential_speed() / self.vt) * ((r_start - self.vt * t) / r_start).ln()
    }

    /// Radius after covering polar angle `theta` from `r_start`.
    pub fn radius_at_angle(&self, r_start: f64, theta: f64) -> f64 {
        r_start * (-self.vt * theta / self.tangential_speed()).exp()
    }

    /// Time to cover an angle `theta` from `r_start`.
    pub fn time_for_angle(&self, r_start: f64, theta: f64) -> f64 {
        (r_start - self.radius_at_angle(r_start, theta)) / self.vt
    }

    /// Duration of one sweep over `2π/n` from `r_start`.
    pub fn sweep_time(&self, r_start: f64) -> f64 {
        r_start * (1.0 - self.lambda) / self.vt
    }
}

pub(crate) fn lambda(p: &ScenarioParams, vs: f64) -> f64 {
    (-TAU * p.vt / (p.n_f64() * (vs * vs - p.vt * p.vt).sqrt())).exp()
}

pub fn spiral_geometry(p: &ScenarioParams, vs: f64) -> Result<SpiralGeometry> {
    p.check_speed(vs)?;
    let lambda = lambda(p, vs);
    Ok(SpiralGeometry {
        vs,
        vt: p.vt,
        phi: (p.vt / vs).asin(),
        lambda,
        tc: (p.r0 + p.r) * (1.0 - lambda) / p.vt,
        span: p.sector(),
    })
}

/// Speed at which a spiral ignoring the inward wavefront motion exactly
/// covers the sensor overlap; used to seed the root search.
pub fn critical_speed_initial_guess(p: &ScenarioParams) -> f64 {
    let log = ((p.r0 + p.r) / (p.r0 - p.r)).ln();
    p.vt * ((p.sector() / log).powi(2) + 1.0).sqrt()
}

/// Balance `(R0 + r)(1 − λ) − 2r·Vs/(Vs + VT)`; decreasing in `Vs`, zero at
/// the critical speed.
pub fn balance(p: &ScenarioParams, vs: f64) -> f64 {
    (p.r0 + p.r) * (1.0 - lambda(p, vs)) - 2.0 * p.r * vs / (vs + p.vt)
}

/// Search bracket shared by the spiral critical-speed solvers.
pub(crate) fn speed_bracket(p: &ScenarioParams) -> (f64, f64) {
    let lo = (p.vt * (1.0 + 1e-9)).max(universal_lower_bound(p));
    (lo, 10.0 * circular_pincer::critical_speed(p))
}

pub(crate) fn interior_guess(guess: f64, lo: f64, hi: f64) -> f64 {
    if guess > lo && guess < hi {
        guess
    } else {
        lo + 1e-3 * (hi - lo)
    }
}

/// Slowest speed at which the spiral pincer holds `R0`.
pub fn critical_speed(p: &ScenarioParams) -> Result<f64> {
    let (lo, hi) = speed_bracket(p);
    let guess = interior_guess(critical_speed_initial_guess(p), lo, hi);
    let problem = RootProblem::new(|vs| balance(p, vs), lo, hi, guess, p.r);
    Ok(rootfind::solve(&problem)?)
}

pub(crate) fn raw_coeffs(p: &ScenarioParams, vs: f64) -> RecursionCoeffs {
    let (r, vt) = (p.r, p.vt);
    let l = lambda(p, vs);
    RecursionCoeffs {
        c1: 2.0 * r * vs / (vs + vt),
        c2: (vt + vs * l) / (vs + vt),
        c3: 2.0 * r * vs * (1.0 - l) / ((vs + vt) * vt),
    }
}

/// Coefficients of the recursion in `R̃` and of the sweep-time recursion.
pub fn coeffs(p: &ScenarioParams, vs: f64) -> Result<RecursionCoeffs> {
    regime(p, vs, critical_speed(p)?)?;
    Ok(raw_coeffs(p, vs))
}

fn asymptote(p: &ScenarioParams, vs: f64) -> f64 {
    2.0 * p.r / (1.0 - lambda(p, vs)) - p.r
}

/// Fixed point of the expansion recursion, `2r/(1 − λ) − r`.
pub fn max_radius(p: &ScenarioParams, vs: f64) -> Result<f64> {
    regime(p, vs, critical_speed(p)?)?;
    Ok(asymptote(p, vs))
}

/// The alternative asymptote `2r·Vs/((1 − λ)(Vs + VT)) − r`. It equals `R0` at
/// the critical speed and is what the simulator converges to.
pub fn alternative_max_radius(p: &ScenarioParams, vs: f64) -> Result<f64> {
    p.check_speed(vs)?;
    Ok(2.0 * p.r * vs / ((1.0 - lambda(p, vs)) * (vs + p.vt)) - p.r)
}

pub fn sweep_count(p: &ScenarioParams, vs: f64) -> Result<u64> {
    require_expansion(p, vs, critical_speed(p)?)?;
    let target = target_radius(p, asymptote(p, vs))?;
    let c = raw_coeffs(p, vs);
    Ok(Affine::new(c.c1, c.c2).count_to_reach(p.r0 + p.r, target + p.r).max(1))
}

fn sweep_model(p: &ScenarioParams, vs: f64) -> impl Fn(f64) -> (f64, f64) + '_ {
    let l = lambda(p, vs);
    move |radius| {
        let t = (radius + p.r) * (1.0 - l) / p.vt;
        (t, 2.0 * p.r - p.vt * t)
    }
}

/// Per-sweep schedule. At the critical speed this is the one-sweep defense
/// task; its budget is `2r·VT/(Vs + VT)`, not zero.
pub fn expansion_schedule(p: &ScenarioParams, vs: f64) -> Result<Vec<ExpansionStep>> {
    if regime(p, vs, critical_speed(p)?)? == Regime::Critical {
        let (t0, delta) = sweep_model(p, vs)(p.r0);
        return Ok(defense_schedule(p, t0, delta));
    }
    let count = sweep_count(p, vs)?;
    let target = target_radius(p, asymptote(p, vs))?;
    Ok(build_schedule(p.r0, target, vs, p.vt, p.r, Some(count), sweep_model(p, vs)))
}

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

/// Closed forms of the spiral geometric series. No regime checks.
pub mod closed_form {
    use super::*;

    fn c2(p: &ScenarioParams, vs: f64) -> f64 {
        raw_coeffs(p, vs).c2
    }

    /// Real-valued sweep count; its ceiling is `N_n`.
    pub fn sweep_count_real(p: &ScenarioParams, vs: f64) -> f64 {
        let l = lambda(p, vs);
        let arg = -p.eps * (1.0 - l) / ((p.r0 + p.r) * (1.0 - l) - 2.0 * p.r);
        arg.ln() / c2(p, vs).ln()
    }

    /// `R_{N-1}`.
    pub fn last_radius(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let (r0, r) = (p.r0, p.r);
        let l = lambda(p, vs);
        r * (1.0 + l) / (1.0 - l) + pow(c2(p, vs), count - 1) * (r0 + r - 2.0 * r / (1.0 - l))
    }

    pub fn first_sweep_time(p: &ScenarioParams, vs: f64) -> f64 {
        (p.r0 + p.r) * (1.0 - lambda(p, vs)) / p.vt
    }

    pub fn last_sweep_time(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let (r0, r, vt) = (p.r0, p.r, p.vt);
        let l = lambda(p, vs);
        2.0 * r / vt + pow(c2(p, vs), count - 1) * (r0 * (1.0 - l) - r * (1.0 + l)) / vt
    }

    pub fn sweep_time_total(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let (r0, r, vt) = (p.r0, p.r, p.vt);
        let l = lambda(p, vs);
        (r0 + r) * (vs + vt) / (vt * vs) - 2.0 * r * (vt + vs * l) / (vt * vs * (1.0 - l))
            - (vs + vt) / (vs * (1.0 - l)) * pow(c2(p, vs), count) * (r0 * (1.0 - l) - r * (1.0 + l)) / vt
            + 2.0 * r * (count - 1) as f64 / vt
    }

    pub fn sweep_time_total_general(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let c = raw_coeffs(p, vs);
        let t0 = first_sweep_time(p, vs);
        (t0 - c.c2 * last_sweep_time(p, vs, count) + (count - 1) as f64 * c.c3) / (1.0 - c.c2)
    }

    /// Outward time up to `R_{N-1}`.
    pub fn out_time_partial(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let (r, vt) = (p.r, p.vt);
        let l = lambda(p, vs);
        let rt0 = p.r0 + r;
        2.0 * r / (vs + vt) - rt0 / vs + 2.0 * r * (vt + vs * l) / (vs * (vs + vt) * (1.0 - l))
            + pow(c2(p, vs), count - 1) * (rt0 / vs - 2.0 * r / (vs * (1.0 - l)))
    }

    /// All outward time, including the last advance.
    pub fn out_time_total(p: &ScenarioParams, vs: f64) -> f64 {
        let (r0, r, eps) = (p.r0, p.r, p.eps);
        let l = lambda(p, vs);
        (l * (r0 + r + eps) + r - r0 - eps) / (vs * (1.0 - l))
    }
}

/// Alternative printed forms of the spiral count and totals. They disagree
/// with direct summation and are kept only for side-by-side comparison.
pub mod printed {
    use super::*;

    /// Count with `(r + ε)` in the log argument; it stops one sensor
    /// half-length early.
    pub fn sweep_count_real(p: &ScenarioParams, vs: f64) -> f64 {
        let l = lambda(p, vs);
        let arg = -(p.r + p.eps) * (1.0 - l) / ((p.r0 + p.r) * (1.0 - l) - 2.0 * p.r);
        arg.ln() / raw_coeffs(p, vs).c2.ln()
    }

    fn q(p: &ScenarioParams, vs: f64) -> f64 {
        let l = lambda(p, vs);
        (p.vt + vs * l - 1.0 + l) / (vs + p.vt)
    }

    /// Count with `(Vs + 1)` and `(1 − VT)` factors.
    pub fn sweep_count_normalized(p: &ScenarioParams, vs: f64) -> f64 {
        let (r0, r, vt, eps) = (p.r0, p.r, p.vt, p.eps);
        let l = lambda(p, vs);
        let num = 2.0 * r * vs * (1.0 - vt) - eps * (1.0 - l) * (vs + 1.0) * (vs + vt);
        let den = (vs + vt) * ((r0 + r) * (1.0 - l) * (vs + 1.0) - 2.0 * r * vs);
        (num / den).ln() / q(p, vs).ln()
    }

    pub fn out_time_total_normalized(p: &ScenarioParams, vs: f64) -> f64 {
        let (r0, r, vt, eps) = (p.r0, p.r, p.vt, p.eps);
        let l = lambda(p, vs);
        2.0 * r * (vs + 1.0 + vt) / ((1.0 - l) * (vs + vt) * (vs + 1.0))
            - (r0 + 2.0 * r + eps) / vs
            - r * (vs - 1.0 + l * vs + l) / (vs * (1.0 - l) * (vs + 1.0))
    }

    pub fn sweep_time_total_normalized(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let (r0, r, vt) = (p.r0, p.r, p.vt);
        let l = lambda(p, vs);
        let n = count as f64;
        (r0 * vs + r0 * vt + r * vt + 2.0 * r * vs * n - r * vs) / (vt * (vs + 1.0))
            - 2.0 * r * vs * (vt + vs * l - 1.0 + l) / (vt * (vs + 1.0).powi(2) * (1.0 - l))
            - (vs + vt) / ((1.0 - l) * (vs + 1.0))
                * pow(q(p, vs), count)
                * ((r0 + r) * (1.0 - l) / vt - 2.0 * r * vs / (vt * (vs + 1.0)))
    }

    /// Outward time up to `R_{N-1}` with `(Vs + 1)` factors.
    pub fn out_time_partial_normalized(p: &ScenarioParams, vs: f64, count: u64) -> f64 {
        let (r0, r, vt) = (p.r0, p.r, p.vt);
        let l = lambda(p, vs);
        let rt0 = r0 + r;
        2.0 * r / (vs + vt) - rt0 / vs
            + 2.0 * r * (vt + vs * l - 1.0 + l) / ((1.0 - l) * (vs + 1.0) * (vs + vt))
            + pow(q(p, vs), count - 1) * (rt0 * (1.0 - l) * (vs + 1.0) - 2.0 * r * vs)
                / (vs * (1.0 - l) * (vs + 1.0))
    }
}
