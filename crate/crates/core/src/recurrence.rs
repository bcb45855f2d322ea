//! First-order affine recursions `x_{k+1} = c2·x_k + c1` with `0 < c2 < 1`.
//!
//! Both pincer protocols reduce to this form (in `R` for the circular sweep,
//! in `R + r` for the spiral one), so sweep counts, last terms, and partial
//! sums share one implementation here.

/// Relative distance from an integer under which the closed-form ceiling is
/// considered ambiguous and the count is taken from direct iteration instead.
pub const CEIL_GUARD: f64 = 1e-12;

/// Hard cap on direct iteration; far beyond any count the closed form allows
/// for `c2` bounded away from 1.
const ITERATION_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub c1: f64,
    pub c2: f64,
}

impl Affine {
    pub fn new(c1: f64, c2: f64) -> Self {
        Affine { c1, c2 }
    }

    pub fn fixed_point(&self) -> f64 {
        self.c1 / (1.0 - self.c2)
    }

    pub fn step(&self, x: f64) -> f64 {
        self.c2 * x + self.c1
    }

    /// `x_k = F + c2^k (x0 - F)`.
    pub fn term(&self, x0: f64, k: u64) -> f64 {
        let f = self.fixed_point();
        f + pow(self.c2, k) * (x0 - f)
    }

    /// `Σ_{i=0}^{count-1} x_i = (x0 - c2·x_{count-1} + (count-1)·c1) / (1 - c2)`.
    pub fn partial_sum(&self, x0: f64, count: u64) -> f64 {
        if count == 0 {
            return 0.0;
        }
        let last = self.term(x0, count - 1);
        (x0 - self.c2 * last + (count - 1) as f64 * self.c1) / (1.0 - self.c2)
    }

    /// Real-valued `k` at which the closed form reaches `target`; the sweep
    /// count is its ceiling. Requires `x0 < target < F`.
    pub fn crossing(&self, x0: f64, target: f64) -> f64 {
        let f = self.fixed_point();
        ((target - f) / (x0 - f)).ln() / self.c2.ln()
    }

    /// Smallest `k ≥ 0` with `x_k ≥ target`, by direct iteration.
    pub fn count_by_iteration(&self, x0: f64, target: f64) -> u64 {
        let mut x = x0;
        let mut k = 0;
        while x < target && k < ITERATION_CAP {
            x = self.step(x);
            k += 1;
        }
        k
    }

    /// Smallest `k` with `x_k ≥ target` from the closed form, falling back to
    /// iteration when the log ratio sits on an integer boundary.
    pub fn count_to_reach(&self, x0: f64, target: f64) -> u64 {
        let k = self.crossing(x0, target);
        if !k.is_finite() {
            return self.count_by_iteration(x0, target);
        }
        if (k - k.round()).abs() <= CEIL_GUARD * k.abs().max(1.0) {
            return self.count_by_iteration(x0, target);
        }
        k.ceil().max(0.0) as u64
    }
}

/// `base^k` for a possibly large integer exponent.
pub fn pow(base: f64, k: u64) -> f64 {
    if k <= i32::MAX as u64 {
        base.powi(k as i32)
    } else {
        base.powf(k as f64)
    }
}
