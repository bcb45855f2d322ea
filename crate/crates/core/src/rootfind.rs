//! Safeguarded Newton iteration for scalar roots.
//!
//! Newton steps use a central finite-difference derivative. A step is only
//! accepted when it lands strictly inside the current sign-change bracket and
//! reduces `|f|`; otherwise the bracket is bisected. The bracket shrinks every
//! iteration, so the returned root always lies inside the initial bracket.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("objective has the same sign at both ends of [{lo}, {hi}] ({f_lo}, {f_hi})")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("no convergence after {iterations} iterations (last x = {x}, f = {fx})")]
    MaxIterations { iterations: usize, x: f64, fx: f64 },
    #[error("invalid bracket [{lo}, {hi}] with guess {guess}")]
    InvalidBracket { lo: f64, hi: f64, guess: f64 },
    #[error("objective is not finite at x = {x}")]
    NonFinite { x: f64 },
}

/// Relative step of the central difference used for the derivative.
pub const FD_RELATIVE_STEP: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy)]
pub struct RootProblem<F> {
    pub objective: F,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub guess: f64,
    pub tol_f: f64,
    pub tol_x: f64,
    pub max_iter: usize,
}

impl<F: Fn(f64) -> f64> RootProblem<F> {
    /// Problem with the default tolerances: `tol_f = 1e-10·f_scale`,
    /// `tol_x = 1e-12·(hi - lo)`, 200 iterations.
    pub fn new(objective: F, bracket_lo: f64, bracket_hi: f64, guess: f64, f_scale: f64) -> Self {
        RootProblem {
            objective,
            bracket_lo,
            bracket_hi,
            guess,
            tol_f: 1e-10 * f_scale,
            tol_x: 1e-12 * (bracket_hi - bracket_lo).abs(),
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Iterate produced by the solver, for inspection and determinism checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iterate {
    pub x: f64,
    pub fx: f64,
    pub newton: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub root: f64,
    pub f_root: f64,
    pub iterations: usize,
    pub trace: Vec<Iterate>,
}

pub fn solve<F: Fn(f64) -> f64>(p: &RootProblem<F>) -> Result<f64, RootError> {
    solve_traced(p).map(|s| s.root)
}

pub fn solve_traced<F: Fn(f64) -> f64>(p: &RootProblem<F>) -> Result<Solution, RootError> {
    let f = &p.objective;
    let (mut lo, mut hi) = (p.bracket_lo, p.bracket_hi);
    if !(lo < p.guess && p.guess < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(RootError::InvalidBracket {
            lo,
            hi,
            guess: p.guess,
        });
    }
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(RootError::NonFinite { x })
        }
    };
    let mut f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    let mut trace = Vec::new();
    if f_lo == 0.0 {
        return Ok(Solution { root: lo, f_root: 0.0, iterations: 0, trace });
    }
    if f_hi == 0.0 {
        return Ok(Solution { root: hi, f_root: 0.0, iterations: 0, trace });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(RootError::NoBracket { lo, hi, f_lo, f_hi });
    }

    let mut x = p.guess;
    let mut fx = eval(x)?;
    trace.push(Iterate { x, fx, newton: false });

    for iteration in 1..=p.max_iter {
        if fx.abs() <= p.tol_f {
            return Ok(Solution { root: x, f_root: fx, iterations: iteration - 1, trace });
        }
        // Shrink the bracket around the sign change.
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }

        let h = FD_RELATIVE_STEP * x.abs().max(f64::MIN_POSITIVE.sqrt());
        let slope = (eval(x + h)? - eval(x - h)?) / (2.0 * h);
        let newton = x - fx / slope;

        let (next, used_newton) = if slope.is_finite() && slope != 0.0 && newton > lo && newton < hi {
            let f_newton = eval(newton)?;
            if f_newton.abs() < fx.abs() {
                (Some((newton, f_newton)), true)
            } else {
                (None, false)
            }
        } else {
            (None, false)
        };
        let (x_next, f_next) = match next {
            Some(v) => v,
            None => {
                let mid = 0.5 * (lo + hi);
                (mid, eval(mid)?)
            }
        };
        let step = (x_next - x).abs();
        x = x_next;
        fx = f_next;
        trace.push(Iterate { x, fx, newton: used_newton });
        if fx.abs() <= p.tol_f || step <= p.tol_x || (hi - lo) <= p.tol_x {
            return Ok(Solution { root: x, f_root: fx, iterations: iteration, trace });
        }
    }
    Err(RootError::MaxIterations {
        iterations: p.max_iter,
        x,
        fx,
    })
}
