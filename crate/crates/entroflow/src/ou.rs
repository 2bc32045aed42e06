//! Exact analytics for the Ornstein-Uhlenbeck process `dx = a x dt + σ dw`.
//!
//! Conditional on `x(0) = x0` the state at time `t` is Gaussian with mean
//! `e^{at} x0` and variance `υ(t) = σ² ∫₀ᵗ e^{2ar} dr`; for a Gaussian
//! initial law `N(m0, v0)` the variance flow is `σ*² + (v0 - σ*²) e^{2at}`
//! where `σ*² = -σ²/(2a)` is the stationary variance (for `a < 0`). The
//! Gibbs entropy therefore increases, stays constant, or decreases according
//! to whether `v0` is below, at, or above `σ*²`, while the conditional
//! entropy relative to the stationary density rises monotonically to zero.

use crate::curve::EntropyCurve;
use crate::error::{require, Error, Result};
use crate::gaussian::Gaussian1d;

/// Parameters of `dx = a x dt + σ dw` with `σ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuParams {
    a: f64,
    sigma: f64,
}

/// Direction of the Gibbs entropy along an OU entropy curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GibbsTrend {
    Increasing,
    Constant,
    Decreasing,
}

impl OuParams {
    pub fn new(a: f64, sigma: f64) -> Result<Self> {
        require(a.is_finite(), || format!("a must be finite, got {a}"))?;
        require(sigma.is_finite() && sigma > 0.0, || {
            format!("sigma must be positive, got {sigma}")
        })?;
        Ok(Self { a, sigma })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Transition variance `υ(t) = σ² (e^{2at} - 1)/(2a)`, evaluated by a
    /// 3-term Taylor series for `|2at| < 1e-5` where the direct quotient
    /// cancels catastrophically (this branch also covers `a = 0`, where
    /// `υ(t) = σ² t` exactly).
    ///
    /// Strictly increasing in `t`. Requires `t >= 0`.
    pub fn variance(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "ou variance needs t >= 0, got {t}");
        let x = 2.0 * self.a * t;
        let s2 = self.sigma * self.sigma;
        if x.abs() < 1e-5 {
            s2 * t * (1.0 + 0.5 * x + x * x / 6.0)
        } else {
            s2 * x.exp_m1() / (2.0 * self.a)
        }
    }

    /// Law of `x(t)` given `x(0) = x0`: `N(e^{at} x0, υ(t))`.
    ///
    /// `t = 0` is rejected: the law is a point mass with no density.
    pub fn transition(&self, x0: f64, t: f64) -> Result<Gaussian1d> {
        require(x0.is_finite(), || format!("x0 must be finite, got {x0}"))?;
        require(t > 0.0, || {
            format!("transition needs t > 0 (point mass at t = 0), got {t}")
        })?;
        Gaussian1d::new((self.a * t).exp() * x0, self.variance(t))
    }

    /// Stationary density `N(0, -σ²/(2a))`, the unique solution of
    /// `2a σ*² + σ² = 0`; exists only for `a < 0`.
    pub fn stationary(&self) -> Result<Gaussian1d> {
        if self.a >= 0.0 {
            return Err(Error::NoStationaryDensity(format!(
                "a = {} is not negative",
                self.a
            )));
        }
        Gaussian1d::new(0.0, -self.sigma * self.sigma / (2.0 * self.a))
    }

    /// Classifies the Gibbs entropy direction by comparing the initial
    /// variance to the stationary variance at relative tolerance `1e-12`.
    pub fn gibbs_trend(&self, init_variance: f64) -> Result<GibbsTrend> {
        require(init_variance.is_finite() && init_variance > 0.0, || {
            format!("initial variance must be positive, got {init_variance}")
        })?;
        let vstar = self.stationary()?.variance();
        let r = init_variance / vstar;
        Ok(if (r - 1.0).abs() <= 1e-12 {
            GibbsTrend::Constant
        } else if r < 1.0 {
            GibbsTrend::Increasing
        } else {
            GibbsTrend::Decreasing
        })
    }

    /// Entropy curve for a Gaussian initial law on a strictly increasing
    /// grid starting at 0. Per grid point: the law of `x(t)` (mean
    /// `e^{at} m0`, variance `σ*² + (v0 - σ*²) e^{2at}`), its Gibbs entropy,
    /// and its conditional entropy relative to the stationary density.
    ///
    /// Mean and variance at time `t >= 0` from the start `N(m0, v0)`, with
    /// `v0 = 0` meaning a point start. Requires `a < 0`: the flow is
    /// written around the stationary fixed point so that a stationary
    /// start stays exactly stationary in floating point.
    pub fn flow(&self, init_mean: f64, init_var: f64, t: f64) -> (f64, f64) {
        assert!(self.a < 0.0, "moment flow around the fixed point needs a < 0");
        let vstar = -self.sigma * self.sigma / (2.0 * self.a);
        (
            init_mean * (self.a * t).exp(),
            vstar + (init_var - vstar) * (2.0 * self.a * t).exp(),
        )
    }

    /// The variance flow is written around the stationary fixed point so
    /// that a stationary start stays exactly stationary in floating point
    /// (the conditional entropy column is then identically zero).
    pub fn entropy_curve(&self, init: &Gaussian1d, times: &[f64]) -> Result<EntropyCurve> {
        let fstar = self.stationary()?;
        require(!times.is_empty(), || "empty time grid".to_string())?;
        require(times[0] == 0.0, || {
            format!("grid must start at 0, got {}", times[0])
        })?;
        require(times.windows(2).all(|w| w[0] < w[1]), || {
            "grid must be strictly increasing".to_string()
        })?;

        let n = times.len();
        let mut mean = Vec::with_capacity(n);
        let mut variance = Vec::with_capacity(n);
        let mut gibbs = Vec::with_capacity(n);
        let mut conditional = Vec::with_capacity(n);
        for &t in times {
            let (m, v) = self.flow(init.mean(), init.variance(), t);
            let law = Gaussian1d::new(m, v)?;
            mean.push(law.mean());
            variance.push(law.variance());
            gibbs.push(law.gibbs_entropy());
            conditional.push(law.conditional_entropy(&fstar));
        }
        Ok(EntropyCurve {
            times: times.to_vec(),
            mean,
            variance,
            gibbs,
            conditional: Some(conditional),
        })
    }
}
