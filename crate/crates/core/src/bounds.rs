//! Protocol-independent lower bound on defender speed.

use std::f64::consts::PI;

use crate::scenario::ScenarioParams;

/// `V_LB = π·R0·VT / (n·r)`: no sweeping process with a slower defender can
/// hold the initial region.
pub fn universal_lower_bound(p: &ScenarioParams) -> f64 {
    PI * p.r0 * p.vt / (p.n_f64() * p.r)
}
