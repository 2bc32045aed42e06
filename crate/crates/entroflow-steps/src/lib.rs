//! Method-of-steps integrator for the linear delay equation
//! `x'(t) = a x(t) + b x(t - τ)` with a given history on `[-τ, 0]`.
//!
//! The equation is integrated one delay interval at a time with classical
//! RK4: on `[kτ, (k+1)τ]` the delayed term reads from the already-computed
//! dense output of interval `k-1` (or from the history when `k = 0`), so the
//! right-hand side is smooth within each interval even though the solution
//! has a derivative kink at every multiple of `τ`. Dense output is cubic
//! Hermite between the RK4 nodes.
//!
//! The history closure supplies `x` on `[-τ, 0]` with the left-limit
//! convention at `0`; the starting value `x(0)` is passed separately. That
//! split is what lets the fundamental solution (history `≡ 0`, `x(0) = 1`)
//! be integrated without smearing its jump: interval `0` sees the zero
//! history, interval `1` sees interval `0`'s dense output starting at `1`.
//!
//! This crate exists as an independent check on closed-form delay-equation
//! solvers, so it shares no code (and no series algebra) with them.

/// One delay interval of the computed solution: RK4 nodes with derivatives,
/// for cubic Hermite evaluation in between.
#[derive(Debug, Clone)]
struct Interval {
    t0: f64,
    h: f64,
    x: Vec<f64>,
    deriv: Vec<f64>,
}

impl Interval {
    fn eval(&self, t: f64) -> f64 {
        let pos = (t - self.t0) / self.h;
        let n_steps = self.x.len() - 1;
        let mut i = pos.floor() as isize;
        if i < 0 {
            i = 0;
        }
        let mut i = i as usize;
        if i >= n_steps {
            i = n_steps - 1;
        }
        let theta = ((t - self.t0) - i as f64 * self.h) / self.h;
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let (d0, d1) = (self.deriv[i] * self.h, self.deriv[i + 1] * self.h);
        let t2 = theta * theta;
        let t3 = t2 * theta;
        x0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + d0 * (t3 - 2.0 * t2 + theta)
            + x1 * (-2.0 * t3 + 3.0 * t2)
            + d1 * (t3 - t2)
    }
}

/// The solution on `[0, n·τ]` produced by [`solve`].
#[derive(Debug, Clone)]
pub struct StepsSolution {
    tau: f64,
    intervals: Vec<Interval>,
}

impl StepsSolution {
    /// Evaluates the solution at `t ∈ [0, n·τ]` (clamped at the ends within
    /// rounding slop; panics well outside the computed range).
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.intervals.len();
        let end = n as f64 * self.tau;
        assert!(
            t >= -1e-9 * self.tau && t <= end * (1.0 + 1e-12) + 1e-300,
            "eval({t}) outside computed range [0, {end}]"
        );
        let mut k = (t / self.tau).floor() as isize;
        if k < 0 {
            k = 0;
        }
        let mut k = k as usize;
        if k >= n {
            k = n - 1;
        }
        self.intervals[k].eval(t)
    }

    /// Upper end of the computed range.
    pub fn t_max(&self) -> f64 {
        self.intervals.len() as f64 * self.tau
    }
}

/// Integrates `x' = a x(t) + b x(t-τ)` over `n_intervals` delay intervals.
///
/// `history(s)` must cover `s ∈ [-τ, 0]` (left limit at `0`); `x0` is the
/// value at `t = 0`. `steps_per_interval` RK4 steps are taken per interval.
pub fn solve(
    a: f64,
    b: f64,
    tau: f64,
    x0: f64,
    history: impl Fn(f64) -> f64,
    n_intervals: usize,
    steps_per_interval: usize,
) -> StepsSolution {
    assert!(tau > 0.0 && tau.is_finite(), "tau must be positive");
    assert!(n_intervals > 0, "need at least one interval");
    assert!(steps_per_interval > 0, "need at least one step per interval");

    let h = tau / steps_per_interval as f64;
    let mut intervals: Vec<Interval> = Vec::with_capacity(n_intervals);
    let mut x_start = x0;

    for k in 0..n_intervals {
        let t0 = k as f64 * tau;
        let source = |t: f64| -> f64 {
            if k == 0 {
                history(t - tau)
            } else {
                intervals[k - 1].eval(t - tau)
            }
        };

        let mut x = Vec::with_capacity(steps_per_interval + 1);
        let mut deriv = Vec::with_capacity(steps_per_interval + 1);
        let mut xi = x_start;
        for i in 0..steps_per_interval {
            let t = t0 + i as f64 * h;
            let src_lo = b * source(t);
            let src_mid = b * source(t + 0.5 * h);
            let src_hi = b * source(t + h);
            let k1 = a * xi + src_lo;
            let k2 = a * (xi + 0.5 * h * k1) + src_mid;
            let k3 = a * (xi + 0.5 * h * k2) + src_mid;
            let k4 = a * (xi + h * k3) + src_hi;
            x.push(xi);
            deriv.push(k1);
            xi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        x.push(xi);
        deriv.push(a * xi + b * source(t0 + tau));
        x_start = xi;
        intervals.push(Interval { t0, h, x, deriv });
    }

    StepsSolution { tau, intervals }
}
