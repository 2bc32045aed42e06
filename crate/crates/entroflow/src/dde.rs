//! Deterministic machinery for the linear delay equation
//! `x'(t) = a x(t) + b x(t - τ)`.
//!
//! Everything builds on the fundamental solution `X(t)`, defined by
//! `X(t) = 0` for `t < 0` and `X(0) = 1`. On the interval
//! `[mτ, (m+1)τ)` the series solution truncates to
//!
//! ```text
//! X(t) = Σ_{k=0..m} e^{a(t-kτ)} bᵏ (t-kτ)ᵏ / k!
//! ```
//!
//! Summing that series directly is hopeless at large `t`: for oscillatory
//! parameters the terms reach astronomical magnitudes while `X` itself
//! decays, so almost all significance cancels. Instead [`FundamentalSolution`]
//! stores, per interval, a polynomial `P_m` with `X(mτ + s) = e^{as} P_m(s)`
//! for `s ∈ [0, τ)`. Substituting that form into the delay equation makes
//! the exponentials cancel, leaving the recurrence `P_m'(s) = b P_{m-1}(s)`
//! with the constant term fixed by continuity, `P_m(0) = e^{aτ} P_{m-1}(τ)`.
//! The coefficients never mix scales the way the raw series terms do, so
//! evaluation is a stable Horner pass, and the representation agrees with
//! direct summation wherever the series is well-conditioned.
//!
//! On top of `X` sit the solution map `S_t φ(0)` for deterministic initial
//! histories, kink-aware Gauss-Legendre quadrature of products
//! `X(q) X(q+lag)` (the integrand has derivative kinks at every multiple of
//! `τ`, shifted by the lag), and the Hayes stability classification of the
//! parameter pair `(aτ, bτ)`.

use crate::error::{require, Error, Result};
use crate::quad;

/// Parameters `(a, b, τ, σ)` of the linear delay equation
/// `dx = (a x(t) + b x(t-τ)) dt + σ dw`; `σ = 0` selects the deterministic
/// equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayParams {
    pub(crate) a: f64,
    pub(crate) b: f64,
    pub(crate) tau: f64,
    pub(crate) sigma: f64,
}

impl DelayParams {
    pub fn new(a: f64, b: f64, tau: f64, sigma: f64) -> Result<Self> {
        require(a.is_finite(), || format!("a must be finite, got {a}"))?;
        require(b.is_finite(), || format!("b must be finite, got {b}"))?;
        require(tau.is_finite() && tau > 0.0, || {
            format!("tau must be positive, got {tau}")
        })?;
        require(sigma.is_finite() && sigma >= 0.0, || {
            format!("sigma must be nonnegative, got {sigma}")
        })?;
        Ok(Self { a, b, tau, sigma })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Initial history of the delay equation on `[-τ, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Constant history `φ ≡ c`.
    PointHistory(f64),
    /// Piecewise-linear history through `(knots[i], values[i])`; the knots
    /// must be strictly increasing and cover `[-τ, 0]`.
    TabulatedHistory { knots: Vec<f64>, values: Vec<f64> },
    /// Random Gaussian history `ξ(s) = σ̄ W(s + τ)` built from a standard
    /// Brownian motion `W`, so `ξ(-τ) = 0` and `Cov(ξ(s), ξ(r)) =
    /// σ̄² (min(s,r) + τ)`.
    BrownianHistory { sigma_bar: f64 },
}

impl InitialCondition {
    /// Validates the variant's own shape, plus coverage of `[-τ, 0]` for
    /// tabulated histories.
    pub fn validate(&self, tau: f64) -> Result<()> {
        match self {
            Self::PointHistory(c) => {
                require(c.is_finite(), || format!("history value must be finite, got {c}"))
            }
            Self::TabulatedHistory { knots, values } => {
                require(knots.len() == values.len(), || {
                    "knots and values must have equal length".to_string()
                })?;
                require(knots.len() >= 2, || {
                    "tabulated history needs at least two knots".to_string()
                })?;
                require(
                    knots.iter().all(|k| k.is_finite())
                        && values.iter().all(|v| v.is_finite()),
                    || "tabulated history must be finite".to_string(),
                )?;
                require(knots.windows(2).all(|w| w[0] < w[1]), || {
                    "knots must be strictly increasing".to_string()
                })?;
                let eps = 1e-12 * tau.max(1.0);
                require(
                    knots[0] <= -tau + eps && *knots.last().unwrap() >= -eps,
                    || format!("knots must cover [-{tau}, 0]"),
                )
            }
            Self::BrownianHistory { sigma_bar } => {
                require(sigma_bar.is_finite() && *sigma_bar > 0.0, || {
                    format!("sigma_bar must be positive, got {sigma_bar}")
                })
            }
        }
    }

    /// Whether the history is a deterministic function (point or tabulated).
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, Self::BrownianHistory { .. })
    }

    /// Evaluates a deterministic history at `s ∈ [-τ, 0]`; linear
    /// interpolation between knots, constant extension outside them.
    pub(crate) fn value_at(&self, s: f64) -> f64 {
        match self {
            Self::PointHistory(c) => *c,
            Self::TabulatedHistory { knots, values } => {
                if s <= knots[0] {
                    return values[0];
                }
                if s >= *knots.last().unwrap() {
                    return *values.last().unwrap();
                }
                let i = knots.partition_point(|&k| k <= s) - 1;
                let w = (s - knots[i]) / (knots[i + 1] - knots[i]);
                values[i] + w * (values[i + 1] - values[i])
            }
            Self::BrownianHistory { .. } => {
                unreachable!("random history has no pointwise value")
            }
        }
    }
}

/// The fundamental solution `X` tabulated as per-interval polynomials
/// `X(mτ + s) = e^{as} P_m(s)` up to a fixed horizon.
///
/// Immutable after construction; evaluation is read-only and shareable
/// across threads.
#[derive(Debug, Clone)]
pub struct FundamentalSolution {
    params: DelayParams,
    horizon: f64,
    /// `intervals[m]` holds the coefficients of `P_m` in the scaled variable
    /// `u = s/τ ∈ [0, 1)`, lowest degree first. The scaling keeps every
    /// coefficient near the magnitude of its contribution, so the trailing
    /// trim in `build_intervals` is a plain magnitude test.
    intervals: Vec<Vec<f64>>,
}

impl FundamentalSolution {
    /// Builds the coefficient tables covering `[0, horizon]`.
    ///
    /// `horizon/τ > 1e6` is rejected: the table and the evaluation cost grow
    /// linearly with the interval count.
    pub fn new(params: &DelayParams, horizon: f64) -> Result<Self> {
        require(horizon.is_finite() && horizon > 0.0, || {
            format!("horizon must be positive, got {horizon}")
        })?;
        require(horizon / params.tau <= 1e6, || {
            format!(
                "horizon {} spans more than 1e6 delay intervals (tau = {})",
                horizon, params.tau
            )
        })?;
        let n_intervals = (horizon / params.tau).floor() as usize + 1;
        Ok(Self {
            params: *params,
            horizon,
            intervals: build_intervals(params, n_intervals),
        })
    }

    pub fn params(&self) -> &DelayParams {
        &self.params
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Evaluates `X(t)` for `t ∈ [-τ, horizon]`; zero for `t < 0`.
    ///
    /// Panics if `t` exceeds the horizon (the higher-level operations check
    /// their time arguments and return errors instead).
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        assert!(
            t <= self.horizon * (1.0 + 1e-12) + 1e-300,
            "X({t}) evaluated beyond horizon {}",
            self.horizon
        );
        let tau = self.params.tau;
        // Floor with a clamp guard: t/tau can land half an ulp past the last
        // tabulated interval when t == horizon.
        let mut m = (t / tau).floor() as usize;
        if m >= self.intervals.len() {
            m = self.intervals.len() - 1;
        }
        let mut s = t - m as f64 * tau;
        if s < 0.0 {
            s = 0.0;
        }
        (self.params.a * s).exp() * horner(&self.intervals[m], s / tau)
    }

    /// `∫_{t_lo}^{t_hi} X(q) X(q + lag) dq` by fixed 16-point Gauss-Legendre
    /// on smooth pieces: the integration range is split at every multiple of
    /// `τ` and at every multiple shifted left by `lag` (where either factor
    /// has a derivative kink), and long pieces are halved down to `τ/2` for
    /// headroom.
    pub fn integrate_xx(&self, t_lo: f64, t_hi: f64, lag: f64) -> Result<f64> {
        require(lag >= 0.0, || format!("lag must be nonnegative, got {lag}"))?;
        require(t_lo >= 0.0 && t_lo <= t_hi, || {
            format!("need 0 <= t_lo <= t_hi, got [{t_lo}, {t_hi}]")
        })?;
        let top = t_hi + lag;
        if top > self.horizon * (1.0 + 1e-12) {
            return Err(Error::HorizonExceeded {
                t: top,
                horizon: self.horizon,
            });
        }
        if t_lo == t_hi {
            return Ok(0.0);
        }

        let tau = self.params.tau;
        let mut cuts = vec![t_lo];
        let mut k = (t_lo / tau).floor() + 1.0;
        while k * tau < t_hi {
            if k * tau > t_lo {
                cuts.push(k * tau);
            }
            k += 1.0;
        }
        let mut k = ((t_lo + lag) / tau).floor() + 1.0;
        while k * tau - lag < t_hi {
            let c = k * tau - lag;
            if c > t_lo {
                cuts.push(c);
            }
            k += 1.0;
        }
        cuts.push(t_hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        let mut sum = quad::Compensated::new();
        let mut f = |q: f64| self.eval(q) * self.eval(q + lag);
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let pieces = ((hi - lo) / (0.5 * tau)).ceil().max(1.0);
            let n = pieces as usize;
            let step = (hi - lo) / pieces;
            for i in 0..n {
                let a = lo + i as f64 * step;
                let b = if i + 1 == n { hi } else { lo + (i + 1) as f64 * step };
                sum.add(quad::fixed(&mut f, a, b));
            }
        }
        Ok(sum.total())
    }

    /// The solution map `S_t φ(0) = X(t) φ(0) + b ∫_{-τ}^0 X(t-r-τ) φ(r) dr`
    /// for a deterministic history, via the substitution `u = t - r - τ`
    /// (the integral then runs over `u ∈ [max(0, t-τ), t]`, where `X`
    /// vanishes for `u < 0`). The quadrature splits at multiples of `τ` and
    /// at the images of tabulated knots.
    ///
    /// A Brownian history is rejected: its state is random, and its mean
    /// path is identically zero.
    pub fn solution_map(&self, init: &InitialCondition, t: f64) -> Result<f64> {
        init.validate(self.params.tau)?;
        require(init.is_deterministic(), || {
            "solution map needs a deterministic history (the mean of a Brownian history is 0)"
                .to_string()
        })?;
        require(t >= 0.0, || format!("need t >= 0, got {t}"))?;
        if t > self.horizon * (1.0 + 1e-12) {
            return Err(Error::HorizonExceeded {
                t,
                horizon: self.horizon,
            });
        }

        let tau = self.params.tau;
        let lo = (t - tau).max(0.0);
        let mut cuts = vec![lo];
        let mut k = (lo / tau).floor() + 1.0;
        while k * tau < t {
            if k * tau > lo {
                cuts.push(k * tau);
            }
            k += 1.0;
        }
        if let InitialCondition::TabulatedHistory { knots, .. } = init {
            for &s in knots {
                let u = t - tau - s;
                if u > lo && u < t {
                    cuts.push(u);
                }
            }
        }
        cuts.push(t);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        let mut integral = quad::Compensated::new();
        let mut f = |u: f64| self.eval(u) * init.value_at(t - tau - u);
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let pieces = ((hi - lo) / (0.5 * tau)).ceil().max(1.0);
            let n = pieces as usize;
            let step = (hi - lo) / pieces;
            for i in 0..n {
                let a = lo + i as f64 * step;
                let b = if i + 1 == n { hi } else { lo + (i + 1) as f64 * step };
                integral.add(quad::fixed(&mut f, a, b));
            }
        }
        Ok(self.eval(t) * init.value_at(0.0) + self.params.b * integral.total())
    }
}

/// Coefficients of `P_m` for `m = 0..n_intervals`.
///
/// Writing `X(mτ + s) = e^{as} P_m(s)` and substituting into
/// `X'(t) = a X(t) + b X(t-τ)` cancels every exponential (the delayed factor
/// is `X(t-τ) = e^{as} P_{m-1}(s)`, same offset `s` one interval back),
/// leaving `P_m'(s) = b P_{m-1}(s)` with the constant term pinned by
/// continuity at the interval boundary: `P_m(0) = e^{aτ} P_{m-1}(τ)`.
///
/// The table stores `d_j = c_j τ^j`, the coefficients in `u = s/τ`, so the
/// recurrence reads `d^{(m)}_{j+1} = (bτ) d^{(m-1)}_j / (j+1)` and
/// `P_{m-1}(τ)` is a Horner pass at `u = 1`. Trailing coefficients below
/// `1e-30` of the largest cannot influence the value on the interval at f64
/// resolution and are trimmed, which keeps the degree bounded on long
/// horizons.
fn build_intervals(params: &DelayParams, n_intervals: usize) -> Vec<Vec<f64>> {
    let btau = params.b * params.tau;
    let growth = (params.a * params.tau).exp();
    let mut intervals = Vec::with_capacity(n_intervals);
    intervals.push(vec![1.0]);
    for m in 1..n_intervals {
        let prev: &Vec<f64> = &intervals[m - 1];
        let mut next = vec![0.0; prev.len() + 1];
        for (j, &d) in prev.iter().enumerate() {
            next[j + 1] = btau * d / (j + 1) as f64;
        }
        next[0] = growth * horner(prev, 1.0);
        let scale: f64 = next.iter().fold(0.0, |acc, d| acc.max(d.abs()));
        while next.len() > 1 && next[next.len() - 1].abs() < scale * 1e-30 {
            next.pop();
        }
        intervals.push(next);
    }
    intervals
}

fn horner(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

/// Hayes classification of `x' = a x(t) + b x(t-τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Stable => "Stable",
            Self::Unstable => "Unstable",
            Self::Marginal => "Marginal",
        })
    }
}

/// The three Hayes inequality margins and the resulting classification.
///
/// The zero solution is exponentially stable if and only if all margins are
/// positive:
///
/// 1. `1 - aτ > 0`,
/// 2. `-(a + b)τ > 0`,
/// 3. `bτ + aτ cos κ + κ sin κ > 0`, where `κ` is the root of
///    `κ = aτ tan κ` on `(0, π)` (`κ = π/2` when `a = 0`).
///
/// `κ` (and the third margin) only exist when `aτ < 1`; the classification
/// is already `Unstable` otherwise. A margin within `1e-9` of zero makes the
/// classification `Marginal`, so boundary parameters such as `bτ = -π/2`
/// are not misclassified by rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HayesReport {
    pub margins: [Option<f64>; 3],
    pub kappa: Option<f64>,
    pub classification: Stability,
}

const MARGINAL_BAND: f64 = 1e-9;

/// Hayes stability classification; see [`HayesReport`].
pub fn hayes_stable(p: &DelayParams) -> Stability {
    hayes_report(p).classification
}

/// Evaluates the three Hayes margins and classifies the parameters.
pub fn hayes_report(p: &DelayParams) -> HayesReport {
    let at = p.a * p.tau;
    let bt = p.b * p.tau;
    let m1 = 1.0 - at;
    if m1 <= -MARGINAL_BAND {
        return HayesReport {
            margins: [Some(m1), None, None],
            kappa: None,
            classification: Stability::Unstable,
        };
    }
    if m1 <= MARGINAL_BAND {
        return HayesReport {
            margins: [Some(m1), None, None],
            kappa: None,
            classification: Stability::Marginal,
        };
    }
    let kappa = solve_kappa(at);
    let m2 = -(at + bt);
    let m3 = bt + at * kappa.cos() + kappa * kappa.sin();
    let margins = [m1, m2, m3];
    let classification = if margins.iter().any(|&m| m <= -MARGINAL_BAND) {
        Stability::Unstable
    } else if margins.iter().any(|&m| m.abs() <= MARGINAL_BAND) {
        Stability::Marginal
    } else {
        Stability::Stable
    };
    HayesReport {
        margins: [Some(m1), Some(m2), Some(m3)],
        kappa: Some(kappa),
        classification,
    }
}

/// Root of `κ cot κ = aτ` on `(0, π)`, by bisection to width `1e-14`.
///
/// `ψ(κ) = κ cot κ` decreases strictly from 1 at `κ → 0` to `-∞` at
/// `κ → π`, so for `aτ < 1` the root exists, is unique, and lies left of
/// `π/2` for `aτ > 0` and right of it for `aτ < 0`.
fn solve_kappa(at: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    if at == 0.0 {
        return FRAC_PI_2;
    }
    let psi = |k: f64| k * k.cos() / k.sin() - at;
    let (mut lo, mut hi) = if at > 0.0 {
        (1e-300, FRAC_PI_2)
    } else {
        (FRAC_PI_2, PI - 1e-15)
    };
    for _ in 0..200 {
        if hi - lo <= 1e-14 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if psi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn params(a: f64, b: f64, tau: f64) -> DelayParams {
        DelayParams::new(a, b, tau, 0.0).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(DelayParams::new(0.0, -1.0, 0.0, 0.0).is_err());
        assert!(DelayParams::new(0.0, -1.0, -1.0, 0.0).is_err());
        assert!(DelayParams::new(0.0, -1.0, 1.0, -0.5).is_err());
        assert!(DelayParams::new(f64::NAN, -1.0, 1.0, 0.0).is_err());
        assert!(DelayParams::new(0.0, -1.0, 1.0, 0.25).is_ok());
    }

    #[test]
    fn fundamental_solution_basics() {
        let fs = FundamentalSolution::new(&params(0.0, -1.0, 1.0), 5.0).unwrap();
        assert_eq!(fs.eval(0.0), 1.0);
        assert_eq!(fs.eval(-0.5), 0.0);
        // On [0, 1) the solution is constant 1; on [1, 2) it is 1-(t-1).
        assert_eq!(fs.eval(0.5), 1.0);
        assert!((fs.eval(1.5) - 0.5).abs() < 1e-15);
        // On [2, 3): 1 - (t-1) + (t-2)^2/2.
        assert!((fs.eval(2.5) - (-0.375)).abs() < 1e-15);
    }

    #[test]
    fn fundamental_solution_matches_direct_series_where_conditioned() {
        // Direct truncated series evaluation, fine at small t where the
        // terms do not cancel catastrophically.
        let series = |p: &DelayParams, t: f64| {
            let m = (t / p.tau).floor() as i32;
            let mut sum = 0.0;
            let mut factorial = 1.0;
            for k in 0..=m {
                if k > 0 {
                    factorial *= k as f64;
                }
                let s = t - k as f64 * p.tau;
                sum += (p.a * s).exp() * p.b.powi(k) * s.powi(k) / factorial;
            }
            sum
        };
        for p in [
            params(0.0, -1.0, 1.0),
            params(-0.4, -0.9, 1.3),
            params(0.3, 0.7, 0.6),
            params(-1.0, 2.0, 0.5),
        ] {
            let fs = FundamentalSolution::new(&p, 8.0 * p.tau).unwrap();
            for i in 0..200 {
                let t = 8.0 * p.tau * (i as f64 + 0.5) / 200.0;
                let want = series(&p, t);
                let got = fs.eval(t);
                assert!(
                    (got - want).abs() <= 1e-13 * want.abs().max(1.0),
                    "a={}, b={}, t={t}: got {got}, want {want}",
                    p.a,
                    p.b
                );
            }
        }
    }

    #[test]
    fn fundamental_solution_satisfies_the_delay_equation() {
        let p = params(-0.4, -0.9, 1.3);
        let fs = FundamentalSolution::new(&p, 12.0).unwrap();
        let h = 1e-6;
        // Interior points away from the kink lattice.
        for i in 1..40 {
            let t = 0.27 + i as f64 * 0.28;
            let lhs = (fs.eval(t + h) - fs.eval(t - h)) / (2.0 * h);
            let rhs = p.a * fs.eval(t) + p.b * fs.eval(t - p.tau);
            assert!((lhs - rhs).abs() < 1e-6, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn horizon_guards() {
        let p = params(0.0, -1.0, 1.0);
        assert!(FundamentalSolution::new(&p, 0.0).is_err());
        assert!(FundamentalSolution::new(&p, 2e6).is_err());
        let fs = FundamentalSolution::new(&p, 3.0).unwrap();
        assert!(fs.integrate_xx(0.0, 2.5, 1.0).is_err());
        assert!(fs
            .solution_map(&InitialCondition::PointHistory(1.0), 4.0)
            .is_err());
    }

    #[test]
    fn integrate_xx_piecewise_closed_forms() {
        let fs = FundamentalSolution::new(&params(0.0, -1.0, 1.0), 4.0).unwrap();
        // X = 1 on [0,1).
        assert!((fs.integrate_xx(0.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        // Empty interval.
        assert_eq!(fs.integrate_xx(0.7, 0.7, 0.3).unwrap(), 0.0);
        // Lagged product: X(q) X(q+1) = 1 * (1 - q) on [0,1].
        assert!((fs.integrate_xx(0.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn integrate_xx_monotone_for_zero_lag() {
        let p = params(-0.2, -1.1, 0.8);
        let fs = FundamentalSolution::new(&p, 20.0).unwrap();
        let mut prev = 0.0;
        for i in 1..=40 {
            let t = i as f64 * 0.5;
            let v = fs.integrate_xx(0.0, t, 0.0).unwrap();
            assert!(v >= prev, "t={t}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn solution_map_constant_history_examples() {
        let p = params(0.0, -1.0, 1.1);
        let fs = FundamentalSolution::new(&p, 3.0).unwrap();
        let phi = InitialCondition::PointHistory(1.0);
        // x(t) = 1 - t on [0, 1.1].
        for i in 0..=11 {
            let t = i as f64 * 0.1;
            let got = fs.solution_map(&phi, t).unwrap();
            assert!((got - (1.0 - t)).abs() < 1e-12, "t={t}: {got}");
        }
        // t = 0 returns phi(0) exactly.
        assert_eq!(fs.solution_map(&phi, 0.0).unwrap(), 1.0);
        // Beyond the first interval: x'(t) = -(1 - (t - 1.1)) integrates to
        // x(2.2) = -0.1 - 0.495 = -0.595.
        let got = fs.solution_map(&phi, 2.2).unwrap();
        assert!((got - (-0.595)).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn solution_map_is_linear_in_the_history() {
        let p = params(-0.3, -0.8, 0.9);
        let fs = FundamentalSolution::new(&p, 6.0).unwrap();
        let phi = InitialCondition::TabulatedHistory {
            knots: vec![-0.9, -0.45, 0.0],
            values: vec![0.2, -0.4, 1.0],
        };
        let psi = InitialCondition::PointHistory(0.7);
        let (alpha, beta) = (1.3, -0.6);
        let combo = InitialCondition::TabulatedHistory {
            knots: vec![-0.9, -0.45, 0.0],
            values: vec![
                alpha * 0.2 + beta * 0.7,
                alpha * -0.4 + beta * 0.7,
                alpha * 1.0 + beta * 0.7,
            ],
        };
        for &t in &[0.3, 0.9, 2.1, 4.5] {
            let lhs = fs.solution_map(&combo, t).unwrap();
            let rhs = alpha * fs.solution_map(&phi, t).unwrap()
                + beta * fs.solution_map(&psi, t).unwrap();
            assert!((lhs - rhs).abs() < 1e-12, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn solution_map_rejects_random_history() {
        let fs = FundamentalSolution::new(&params(0.0, -1.0, 1.0), 2.0).unwrap();
        assert!(fs
            .solution_map(&InitialCondition::BrownianHistory { sigma_bar: 1.0 }, 1.0)
            .is_err());
    }

    #[test]
    fn tabulated_history_validation() {
        let tau = 1.0;
        let bad_cover = InitialCondition::TabulatedHistory {
            knots: vec![-0.5, 0.0],
            values: vec![1.0, 1.0],
        };
        assert!(bad_cover.validate(tau).is_err());
        let not_sorted = InitialCondition::TabulatedHistory {
            knots: vec![-1.0, -0.2, -0.4, 0.0],
            values: vec![1.0, 1.0, 1.0, 1.0],
        };
        assert!(not_sorted.validate(tau).is_err());
        let ok = InitialCondition::TabulatedHistory {
            knots: vec![-1.0, 0.0],
            values: vec![0.5, 1.5],
        };
        assert!(ok.validate(tau).is_ok());
        assert_eq!(ok.value_at(-0.5), 1.0);
    }

    #[test]
    fn hayes_classification_examples() {
        assert_eq!(hayes_stable(&params(0.0, -1.0, 1.0)), Stability::Stable);
        assert_eq!(
            hayes_stable(&params(0.0, -1.0, FRAC_PI_2)),
            Stability::Marginal
        );
        assert_eq!(hayes_stable(&params(2.0, -1.0, 1.0)), Stability::Unstable);
        assert_eq!(hayes_stable(&params(2.0, 5.0, 1.0)), Stability::Unstable);
        // Second condition: a + b >= 0 is not stable.
        assert_eq!(hayes_stable(&params(-0.5, 0.5, 1.0)), Stability::Marginal);
        assert_eq!(hayes_stable(&params(-0.5, 0.6, 1.0)), Stability::Unstable);
    }

    #[test]
    fn hayes_kappa_solves_its_equation() {
        for &(a, tau) in &[(0.5, 1.0), (-0.7, 1.3), (0.9, 0.5), (-2.5, 1.1)] {
            let report = hayes_report(&params(a, -1.0, tau));
            let kappa = report.kappa.unwrap();
            let at = a * tau;
            assert!(kappa > 0.0 && kappa < std::f64::consts::PI);
            assert!(
                (kappa * kappa.cos() / kappa.sin() - at).abs() < 1e-12,
                "a={a}, tau={tau}: kappa={kappa}"
            );
            // Branch choice: left of pi/2 for at > 0, right for at < 0.
            if at > 0.0 {
                assert!(kappa < FRAC_PI_2);
            } else {
                assert!(kappa > FRAC_PI_2);
            }
        }
        assert_eq!(
            hayes_report(&params(0.0, -1.0, 2.0)).kappa.unwrap(),
            FRAC_PI_2
        );
    }

    #[test]
    fn hayes_margins_unavailable_when_first_condition_fails() {
        let report = hayes_report(&params(2.0, -1.0, 1.0));
        assert_eq!(report.classification, Stability::Unstable);
        assert!(report.kappa.is_none());
        assert!(report.margins[1].is_none());
        assert!(report.margins[2].is_none());
    }

    #[test]
    fn third_margin_is_exactly_zero_at_the_marginal_point() {
        let report = hayes_report(&params(0.0, -1.0, FRAC_PI_2));
        assert_eq!(report.margins[2], Some(0.0));
    }
}
