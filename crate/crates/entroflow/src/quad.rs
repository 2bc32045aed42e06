//! Gauss-Legendre quadrature shared by the entropy and covariance integrals.
//!
//! Two entry points: [`fixed`] applies a single 16-point rule to an interval
//! that is already known to be smooth, and [`adaptive`] subdivides the worst
//! interval until an interval-halving error estimate meets a tolerance.

use crate::error::{Error, Result};
use std::sync::OnceLock;

const ORDER: usize = 16;
const MAX_SEGMENTS: usize = 4096;

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1],
/// computed once by Newton iteration on the Legendre polynomial. Only half
/// the roots are iterated; the rest follow by symmetry, which keeps the
/// rule exactly symmetric in floating point.
fn rule() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_deriv(ORDER, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            nodes[ORDER - 1 - i] = -x;
            weights[i] = w;
            weights[ORDER - 1 - i] = w;
        }
        (nodes, weights)
    })
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`, via the
/// three-term recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// 16-point Gauss-Legendre approximation of `∫_a^b f`.
pub(crate) fn fixed(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = rule();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = Compensated::new();
    for (x, w) in nodes.iter().zip(weights.iter()) {
        sum.add(w * f(mid + half * x));
    }
    half * sum.total()
}

/// Adaptive composite Gauss-Legendre integration of `∫_a^b f` to absolute
/// tolerance `tol`. The error of each segment is estimated by comparing one
/// 16-point rule against its two-half refinement; the segment with the
/// largest estimate is split until the total estimate fits the budget.
pub(crate) fn adaptive(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    struct Segment {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }

    fn refine(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let whole = fixed(f, a, b);
        let mid = 0.5 * (a + b);
        let halves = fixed(f, a, mid) + fixed(f, mid, b);
        (halves, (halves - whole).abs())
    }

    if a == b {
        return Ok(0.0);
    }
    let (value, err) = refine(f, a, b);
    let mut segments = vec![Segment { a, b, value, err }];
    loop {
        let total_err: f64 = segments.iter().map(|s| s.err).sum();
        if total_err <= tol {
            let mut sum = Compensated::new();
            for s in &segments {
                sum.add(s.value);
            }
            return Ok(sum.total());
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureNonConvergence {
                requested: tol,
                achieved: total_err,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|(_, s), (_, t)| s.err.total_cmp(&t.err))
            .map(|(i, _)| i)
            .expect("segment list is never empty");
        let Segment { a, b, .. } = segments[worst];
        let mid = 0.5 * (a + b);
        let (lv, le) = refine(f, a, mid);
        let (rv, re) = refine(f, mid, b);
        segments[worst] = Segment {
            a,
            b: mid,
            value: lv,
            err: le,
        };
        segments.push(Segment {
            a: mid,
            b,
            value: rv,
            err: re,
        });
    }
}

/// Neumaier compensated accumulator: running sum plus a correction term,
/// robust to summands larger than the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.c
    }
}
