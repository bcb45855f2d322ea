//! Time-stepped wavefront simulator.
//!
//! The circle is split into `M` angular bins. Each bin stores the radius of
//! the protected region in that direction. Outside any sensor the worst-case
//! invader wavefront moves inward at `VT`, so bin `j` is kept lazily as a
//! level with `ρ_j(t) = level_j − VT·t`.
//!
//! When a sensor crosses a bin center it clears the bin up to its outer tip,
//! provided its inner tip reaches the protected region (closed interval). If
//! the inner tip lies above `ρ_j`, the band in between was never swept and an
//! `UnderSensor` breach is logged instead.
//!
//! Sweeps are ticked with `dt`. Bin crossing times are interpolated inside a
//! tick, and the spiral polar angle is integrated with RK4. Transitions
//! between sweeps are radial moves at `Vs` and are computed in closed form.
//! Nothing is cleared during a transition.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::same_direction::beta0;
use crate::scenario::{ProtocolKind, ScenarioParams};

pub const DEFAULT_BINS: usize = 3600;
pub const MIN_BINS: usize = 360;
pub const DEFAULT_SWEEPS: usize = 10;

/// Absolute slack of the clearing test, relative to `R0 + 2r`.
const CONTACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimTask {
    /// Hold `R0`: after each sweep the defenders return to the initial radius.
    Defense,
    /// After each sweep the defenders move out to meet the wavefront.
    Expansion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub bins: usize,
    /// Tick length; derived from the bin width when absent.
    pub dt: Option<f64>,
    pub sweeps: usize,
    pub task: SimTask,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            bins: DEFAULT_BINS,
            dt: None,
            sweeps: DEFAULT_SWEEPS,
            task: SimTask::Expansion,
        }
    }
}

impl SimConfig {
    pub fn with_task(self, task: SimTask) -> Self {
        SimConfig { task, ..self }
    }

    pub fn with_sweeps(self, sweeps: usize) -> Self {
        SimConfig { sweeps, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BreachKind {
    UnderSensor,
    CenterReached,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreachEvent {
    pub t: f64,
    pub bin: usize,
    pub rho_at_pass: f64,
    pub sensor_inner: f64,
    pub kind: BreachKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefenderPose {
    pub id: usize,
    /// Polar angle of the sensor line.
    pub angle: f64,
    pub r_inner: f64,
    pub r_outer: f64,
    /// +1 counter-clockwise, −1 clockwise.
    pub direction: i8,
}

/// Per-bin protected radius.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefrontState {
    pub bins: usize,
    pub t: f64,
    pub vt: f64,
    level: Vec<f64>,
    pub breaches: Vec<BreachEvent>,
}

impl WavefrontState {
    pub fn new(bins: usize, r0: f64, vt: f64) -> Self {
        WavefrontState {
            bins,
            t: 0.0,
            vt,
            level: vec![r0; bins],
            breaches: Vec::new(),
        }
    }

    pub fn bin_width(&self) -> f64 {
        TAU / self.bins as f64
    }

    pub fn bin_center(&self, j: usize) -> f64 {
        TAU * (j as f64 + 0.5) / self.bins as f64
    }

    pub fn rho_at(&self, j: usize, t: f64) -> f64 {
        self.level[j] - self.vt * t
    }

    /// Current protected radius of every bin.
    pub fn rho(&self) -> Vec<f64> {
        self.level.iter().map(|l| l - self.vt * self.t).collect()
    }

    /// `(bin, ρ)` of the lowest bin at time `t`.
    pub fn min_at(&self, t: f64) -> (usize, f64) {
        let (j, level) = self
            .level
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, &l)| if l < acc.1 { (j, l) } else { acc });
        (j, level - self.vt * t)
    }

    pub fn max_at(&self, t: f64) -> f64 {
        self.level.iter().fold(f64::NEG_INFINITY, |a, &l| a.max(l)) - self.vt * t
    }

    /// Passes a sensor spanning `[inner, outer]` over bin `j` at time `t`.
    /// Returns the clearance margin `ρ − inner`.
    fn pass(&mut self, j: usize, t: f64, inner: f64, outer: f64, tol: f64) -> f64 {
        let rho = self.rho_at(j, t);
        let margin = rho - inner;
        if margin >= -tol {
            self.level[j] = self.level[j].max(outer + self.vt * t);
        } else {
            self.breaches.push(BreachEvent {
                t,
                bin: j,
                rho_at_pass: rho,
                sensor_inner: inner,
                kind: BreachKind::UnderSensor,
            });
        }
        margin
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// Protected radius at the start of the sweep (lowest bin).
    pub radius: f64,
    pub rho_max_start: f64,
    pub rho_min_end: f64,
    pub rho_max_end: f64,
    /// Smallest `ρ − inner` over every bin pass of this sweep.
    pub margin: f64,
    pub breaches: usize,
    pub poses: Vec<DefenderPose>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub kind: ProtocolKind,
    pub vs: f64,
    pub bins: usize,
    pub dt: f64,
    pub sweeps: Vec<SweepRecord>,
    /// Smallest clearance margin over all passes.
    pub min_margin: f64,
    /// Smallest clearance margin from the second sweep on.
    pub steady_margin: f64,
    pub breaches: Vec<BreachEvent>,
    pub total_time: f64,
    /// `R_scale·2π/M + VT·dt` with `R_scale` the largest sensor outer radius seen.
    pub grid_tolerance: f64,
    pub center_reached: bool,
}

impl SimReport {
    pub fn under_sensor_breaches(&self) -> usize {
        self.breaches.iter().filter(|b| b.kind == BreachKind::UnderSensor).count()
    }
}

/// Bins crossed by one defender during one sweep, sorted by angular offset
/// from the sweep start.
struct Pass {
    bins: Vec<(f64, usize)>,
    next: usize,
    pose: DefenderPose,
}

fn sector_of(j: usize, bins: usize, n: usize) -> usize {
    (2 * j + 1) * n / (2 * bins)
}

/// Offset list of one sector swept from `start` in `direction`.
fn sector_pass(state: &WavefrontState, n: usize, sector: usize, direction: i8) -> Vec<(f64, usize)> {
    let width = TAU / n as f64;
    let lo = width * sector as f64;
    let mut out: Vec<(f64, usize)> = (0..state.bins)
        .filter(|&j| sector_of(j, state.bins, n) == sector)
        .map(|j| {
            let u = state.bin_center(j) - lo;
            let off = if direction > 0 { u } else { width - u };
            (off.max(0.0), j)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Offset list of an arbitrary counter-clockwise arc.
fn arc_pass(state: &WavefrontState, start: f64, span: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = (0..state.bins)
        .filter_map(|j| {
            let off = (state.bin_center(j) - start).rem_euclid(TAU);
            (off <= span).then_some((off, j))
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

struct Plan {
    passes: Vec<Pass>,
    span: f64,
}

/// Sector assignments of sweep `index`.
fn plan_sweep(
    state: &WavefrontState,
    p: &ScenarioParams,
    vs: f64,
    kind: ProtocolKind,
    index: usize,
    radius: f64,
    drift: &mut [f64],
) -> Plan {
    let n = p.n as usize;
    let width = p.sector();
    let mut passes = Vec::with_capacity(n);
    let mut span = width;
    match kind {
        ProtocolKind::CircularPincer | ProtocolKind::SpiralPincer => {
            let flip = if index.is_multiple_of(2) { 1 } else { -1 };
            for d in 0..n {
                let m = d / 2;
                let boundary = width * (2 * m + 1) as f64;
                let (sector, outward_dir) = if d % 2 == 0 { (2 * m + 1, 1i8) } else { (2 * m, -1i8) };
                let direction = outward_dir * flip;
                let angle = if direction > 0 {
                    width * sector as f64
                } else {
                    width * (sector + 1) as f64
                };
                debug_assert!(index % 2 == 1 || (angle - boundary).abs() < 1e-12);
                passes.push(Pass {
                    bins: sector_pass(state, n, sector, direction),
                    next: 0,
                    pose: DefenderPose { id: d, angle, r_inner: 0.0, r_outer: 0.0, direction },
                });
            }
        }
        ProtocolKind::CircularSameDirection => {
            for d in 0..n {
                let sector = (d + index) % n;
                passes.push(Pass {
                    bins: sector_pass(state, n, sector, 1),
                    next: 0,
                    pose: DefenderPose { id: d, angle: width * sector as f64, r_inner: 0.0, r_outer: 0.0, direction: 1 },
                });
            }
        }
        ProtocolKind::SpiralSameDirection => {
            span = width + beta0(p, vs, radius);
            for (d, start) in drift.iter_mut().enumerate() {
                passes.push(Pass {
                    bins: arc_pass(state, *start, span),
                    next: 0,
                    pose: DefenderPose { id: d, angle: start.rem_euclid(TAU), r_inner: 0.0, r_outer: 0.0, direction: 1 },
                });
                *start += span;
            }
        }
    }
    Plan { passes, span }
}

/// Angular rate of the sensor center at radius `center`.
fn angular_rate(vs: f64, vt: f64, spiral: bool, center: f64) -> f64 {
    if spiral {
        (vs * vs - vt * vt).sqrt() / center
    } else {
        vs / center
    }
}

/// Smallest sensor-center radius expected in the first sweep.
fn reference_center(p: &ScenarioParams, vs: f64, kind: ProtocolKind) -> f64 {
    if kind.is_spiral() {
        let span = p.sector() + if kind.is_pincer() { 0.0 } else { beta0(p, vs, p.r0) };
        (p.r0 + p.r) * (-p.vt * span / (vs * vs - p.vt * p.vt).sqrt()).exp()
    } else {
        p.r0
    }
}

/// Default tick: at most half a bin of angular travel and `r/(50·Vs)`.
pub fn default_dt(p: &ScenarioParams, vs: f64, kind: ProtocolKind, bins: usize) -> f64 {
    let width = TAU / bins as f64;
    let rate = angular_rate(vs, p.vt, kind.is_spiral(), reference_center(p, vs, kind));
    (0.5 * width / rate).min(p.r / (50.0 * vs))
}

fn validate(p: &ScenarioParams, vs: f64, kind: ProtocolKind, grid: &SimConfig) -> Result<f64> {
    p.check_speed(vs)?;
    if grid.bins < MIN_BINS {
        return Err(Error::SimConfig(format!("bins = {} is below the minimum {MIN_BINS}", grid.bins)));
    }
    if grid.sweeps == 0 {
        return Err(Error::SimConfig("at least one sweep is required".into()));
    }
    let dt = match grid.dt {
        None => default_dt(p, vs, kind, grid.bins),
        Some(dt) => {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::SimConfig(format!("dt = {dt} must be positive")));
            }
            let rate = angular_rate(vs, p.vt, kind.is_spiral(), reference_center(p, vs, kind));
            let width = TAU / grid.bins as f64;
            if rate * dt >= width {
                return Err(Error::SimConfig(format!(
                    "dt = {dt} moves {:.3e} rad per tick, more than the bin width {width:.3e}",
                    rate * dt
                )));
            }
            dt
        }
    };
    Ok(dt)
}

/// Runs `grid.sweeps` sweeps of protocol `kind` at speed `vs`.
pub fn run(p: &ScenarioParams, vs: f64, kind: ProtocolKind, grid: &SimConfig) -> Result<SimReport> {
    let dt = validate(p, vs, kind, grid)?;
    let spiral = kind.is_spiral();
    let (r, vt) = (p.r, p.vt);
    let tol = CONTACT_TOL * (p.r0 + 2.0 * r);
    let mut state = WavefrontState::new(grid.bins, p.r0, vt);
    let width = state.bin_width();
    let mut drift: Vec<f64> = (0..p.n as usize).map(|d| p.sector() * d as f64).collect();

    // Reference point: sensor center for circular sweeps, inner tip for spirals.
    let mut reference = p.r0;
    let mut r_scale = p.r0 + r;
    let mut records = Vec::with_capacity(grid.sweeps);
    let mut center_reached = false;

    for index in 0..grid.sweeps {
        let t_start = state.t;
        let (min_bin, radius) = state.min_at(t_start);
        if radius <= 0.0 {
            center_reached = true;
            state.breaches.push(BreachEvent {
                t: t_start,
                bin: min_bin,
                rho_at_pass: 0.0,
                sensor_inner: reference - if spiral { 0.0 } else { r },
                kind: BreachKind::CenterReached,
            });
            break;
        }
        let rho_max_start = state.max_at(t_start);
        let center0 = if spiral { reference + r } else { reference };
        let mut plan = plan_sweep(&state, p, vs, kind, index, radius, &mut drift);
        let breaches_before = state.breaches.len();
        let mut margin = f64::INFINITY;

        // Sensor center radius `tau` after the sweep start.
        let center_at = |tau: f64| if spiral { center0 - vt * tau } else { center0 };
        for pass in &mut plan.passes {
            pass.pose.r_inner = center0 - r;
            pass.pose.r_outer = center0 + r;
        }
        let poses: Vec<DefenderPose> = plan.passes.iter().map(|p| p.pose).collect();

        let mut tau = 0.0;
        let mut theta = 0.0;
        let mut finished = false;
        while !finished {
            // Sub-step so that no tick covers a full bin.
            let mut h = dt;
            while center_at(tau + h) <= 0.0 || angular_rate(vs, vt, spiral, center_at(tau + h)) * h >= width {
                h *= 0.5;
                if h < 1e-12 * dt {
                    break;
                }
            }
            if h < 1e-12 * dt {
                center_reached = true;
                break;
            }
            let rate = |s: f64| angular_rate(vs, vt, spiral, center_at(s));
            let mut theta_new = if spiral {
                let (k1, k2, k4) = (rate(tau), rate(tau + 0.5 * h), rate(tau + h));
                theta + h * (k1 + 4.0 * k2 + k4) / 6.0
            } else {
                vs * (tau + h) / center0
            };
            if theta_new >= plan.span {
                h *= (plan.span - theta) / (theta_new - theta);
                theta_new = plan.span;
                finished = true;
            }
            for pass in &mut plan.passes {
                while let Some(&(off, j)) = pass.bins.get(pass.next) {
                    if off > theta_new && !(finished && off <= plan.span) {
                        break;
                    }
                    let frac = if theta_new > theta { ((off - theta) / (theta_new - theta)).clamp(0.0, 1.0) } else { 1.0 };
                    let tau_c = tau + frac * h;
                    let c = center_at(tau_c);
                    let m = state.pass(j, t_start + tau_c, c - r, c + r, tol);
                    margin = margin.min(m);
                    pass.next += 1;
                }
            }
            tau += h;
            theta = theta_new;
        }
        state.t = t_start + tau;
        let t_end = state.t;
        let end_center = center_at(tau);
        r_scale = r_scale.max(center0 + r);
        let (_, w0) = state.min_at(t_end);
        records.push(SweepRecord {
            index,
            t_start,
            t_end,
            radius,
            rho_max_start,
            rho_min_end: w0,
            rho_max_end: state.max_at(t_end),
            margin,
            breaches: state.breaches.len() - breaches_before,
            poses,
        });
        if center_reached {
            break;
        }

        // Radial transition of the reference point.
        let p0 = if spiral { end_center - r } else { end_center };
        let (duration, next) = match grid.task {
            SimTask::Expansion if w0 >= p0 => {
                let d = (w0 - p0) / (vs + vt);
                (d, p0 + vs * d)
            }
            SimTask::Expansion => {
                let d = (p0 - w0) / (vs - vt);
                (d, p0 - vs * d)
            }
            SimTask::Defense => ((p.r0 - p0).abs() / vs, p.r0),
        };
        state.t += duration;
        reference = next;
    }

    let breaches = std::mem::take(&mut state.breaches);
    let min_margin = records.iter().map(|s| s.margin).fold(f64::INFINITY, f64::min);
    let steady_margin = if records.len() > 1 {
        records[1..].iter().map(|s| s.margin).fold(f64::INFINITY, f64::min)
    } else {
        min_margin
    };
    Ok(SimReport {
        kind,
        vs,
        bins: grid.bins,
        dt,
        sweeps: records,
        min_margin,
        steady_margin,
        breaches,
        total_time: state.t,
        grid_tolerance: r_scale * width + vt * dt,
        center_reached,
    })
}

/// Steady clearance margin at each speed. Runs are independent and execute
/// in parallel; the output keeps the input order.
pub fn margin_curve(
    p: &ScenarioParams,
    kind: ProtocolKind,
    speeds: &[f64],
    grid: &SimConfig,
) -> Result<Vec<(f64, f64)>> {
    if speeds.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::SimConfig("speeds must be sorted ascending".into()));
    }
    speeds
        .par_iter()
        .map(|&vs| run(p, vs, kind, grid).map(|rep| (vs, rep.steady_margin)))
        .collect()
}

/// Speed at which a margin curve first changes sign, by linear interpolation.
pub fn zero_crossing(curve: &[(f64, f64)]) -> Option<f64> {
    curve.windows(2).find_map(|w| {
        let ((v0, m0), (v1, m1)) = (w[0], w[1]);
        if m0 == 0.0 {
            Some(v0)
        } else if m0 < 0.0 && m1 >= 0.0 {
            Some(v0 + (v1 - v0) * (-m0) / (m1 - m0))
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{circular_pincer, spiral_pincer};
    use approx::assert_relative_eq;

    fn params() -> ScenarioParams {
        ScenarioParams::new(100.0, 10.0, 1.0, 2, 0.2).unwrap()
    }

    fn coarse(task: SimTask, sweeps: usize) -> SimConfig {
        SimConfig { bins: 720, dt: None, sweeps, task }
    }

    #[test]
    fn sectors_partition_the_circle() {
        for (bins, n) in [(360, 2), (3600, 6), (720, 32)] {
            let mut counts = vec![0; n];
            for j in 0..bins {
                counts[sector_of(j, bins, n)] += 1;
            }
            assert_eq!(counts.iter().sum::<usize>(), bins);
            assert!(counts.iter().all(|&c| c > 0));
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let p = params();
        let few = SimConfig { bins: 100, ..SimConfig::default() };
        assert!(matches!(run(&p, 40.0, ProtocolKind::CircularPincer, &few), Err(Error::SimConfig(_))));
        let coarse_dt = SimConfig { dt: Some(1.0), ..SimConfig::default() };
        assert!(matches!(run(&p, 40.0, ProtocolKind::CircularPincer, &coarse_dt), Err(Error::SimConfig(_))));
        assert!(run(&p, 0.5, ProtocolKind::CircularPincer, &SimConfig::default()).is_err());
    }

    #[test]
    fn circular_defense_margin_is_tight_at_critical_speed() {
        let p = params();
        let vc = circular_pincer::critical_speed(&p);
        let rep = run(&p, vc, ProtocolKind::CircularPincer, &coarse(SimTask::Defense, 4)).unwrap();
        assert_eq!(rep.under_sensor_breaches(), 0);
        assert!(rep.min_margin.abs() <= rep.grid_tolerance, "{}", rep.min_margin);
        let slow = run(&p, 0.9 * vc, ProtocolKind::CircularPincer, &coarse(SimTask::Defense, 4)).unwrap();
        assert!(slow.under_sensor_breaches() > 0);
    }

    #[test]
    fn spiral_sweep_preserves_circular_shape() {
        let p = params();
        let vs = spiral_pincer::critical_speed(&p).unwrap() + 2.0;
        let rep = run(&p, vs, ProtocolKind::SpiralPincer, &coarse(SimTask::Expansion, 4)).unwrap();
        assert_eq!(rep.under_sensor_breaches(), 0);
        for s in &rep.sweeps {
            assert!(s.rho_max_end - s.rho_min_end <= rep.grid_tolerance);
        }
    }

    #[test]
    fn pincer_pairs_start_back_to_back() {
        let p = params().with_n(4);
        let rep = run(&p, 20.0, ProtocolKind::CircularPincer, &coarse(SimTask::Defense, 2)).unwrap();
        let poses = &rep.sweeps[0].poses;
        assert_eq!(poses[0].angle, poses[1].angle);
        assert_eq!(poses[0].direction, -poses[1].direction);
        // Directions flip on the next sweep.
        assert_eq!(rep.sweeps[1].poses[0].direction, -poses[0].direction);
    }

    #[test]
    fn circular_expansion_follows_schedule() {
        let p = params();
        let vs = circular_pincer::critical_speed(&p) + 10.0;
        let rep = run(&p, vs, ProtocolKind::CircularPincer, &coarse(SimTask::Expansion, 5)).unwrap();
        let steps = circular_pincer::expansion_schedule(&p, vs).unwrap();
        for (s, e) in rep.sweeps.iter().zip(&steps) {
            assert!((s.radius - e.radius).abs() <= 2.0 * rep.grid_tolerance, "{} vs {}", s.radius, e.radius);
        }
    }

    #[test]
    fn zero_crossing_interpolates() {
        let curve = [(1.0, -2.0), (2.0, -1.0), (3.0, 1.0)];
        assert_relative_eq!(zero_crossing(&curve).unwrap(), 2.5);
        assert_eq!(zero_crossing(&[(1.0, 1.0), (2.0, 2.0)]), None);
    }

    #[test]
    fn deterministic_runs() {
        let p = params();
        let g = coarse(SimTask::Expansion, 3);
        let a = run(&p, 35.0, ProtocolKind::SpiralSameDirection, &g).unwrap();
        let b = run(&p, 35.0, ProtocolKind::SpiralSameDirection, &g).unwrap();
        assert_eq!(a, b);
    }
}
