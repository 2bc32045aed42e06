//! Exact Gaussian law of the linear stochastic delay equation
//! `dx = (a x(t) + b x(t-τ)) dt + σ dW` and the entropy curves it induces.
//!
//! For a deterministic history the solution at time `t` is Gaussian with
//! mean `S_t φ(0)` (the noiseless solution) and variance
//! `υ(t) = σ² ∫₀ᵗ X²(q) dq`, where `X` is the fundamental solution from
//! [`crate::dde`]. The pair `(x(t), x(t-τ))` is jointly Gaussian with
//! covariance `r_t(s₁,s₂) = σ² ∫₀^{t+min(s₁,s₂)} X(q) X(q+|s₂-s₁|) dq`;
//! its 2×2 matrix is singular exactly up to `t = τ` and strictly positive
//! definite afterwards.
//!
//! When the delay equation is stable the variance converges to the
//! stationary variance `K(0)`, available in closed form together with the
//! stationary covariance `K(t)` on `[0, τ]`. Conditional entropy against
//! the stationary density then measures the approach to equilibrium;
//! Brownian-history curves show the non-monotone regimes.

use crate::curve::EntropyCurve;
use crate::dde::{hayes_stable, DelayParams, FundamentalSolution, InitialCondition, Stability};
use crate::error::{require, Error, Result};
use crate::gaussian::{self, Gaussian1d};
use crate::quad;

/// Joint Gaussian law of `(x(t), x(t-τ))` for a deterministic history.
///
/// Mean order is `(S_t φ(0), S_t φ(-τ))`: present first, delayed second.
#[derive(Debug, Clone)]
pub struct PairLaw {
    mean: (f64, f64),
    cov: [[f64; 2]; 2],
    degenerate: bool,
}

impl PairLaw {
    pub fn mean(&self) -> (f64, f64) {
        self.mean
    }

    /// Covariance matrix in the same component order as the mean.
    pub fn cov(&self) -> [[f64; 2]; 2] {
        self.cov
    }

    pub fn det(&self) -> f64 {
        self.cov[0][0] * self.cov[1][1] - self.cov[0][1] * self.cov[1][0]
    }

    /// True exactly when `t ≤ τ`, where the pair has no joint density: the
    /// delayed coordinate is still a deterministic function of the history.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Law of `x(t-τ)` conditioned on `x(t) = x`, by 2-D Gaussian
    /// conditioning. Needs the joint density, so `t > τ`.
    pub fn condition_past_on_present(&self, x: f64) -> Result<Gaussian1d> {
        require(x.is_finite(), || format!("x must be finite, got {x}"))?;
        require(!self.degenerate, || {
            "pair law has no joint density for t <= tau".to_string()
        })?;
        let v = self.cov[0][0];
        let mean = self.mean.1 + self.cov[0][1] / v * (x - self.mean.0);
        let var = self.cov[1][1] - self.cov[0][1] * self.cov[0][1] / v;
        Gaussian1d::new(mean, var)
    }
}

/// Which closed form the stationary covariance takes, by the sign of
/// `a² - b²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Hyperbolic,
    Critical,
    Trigonometric,
}

/// Stationary law of the stable equation: variance `K(0)` and covariance
/// function `K(t)` on `[0, τ]`.
#[derive(Debug, Clone)]
pub struct StationaryLaw {
    sigma2: f64,
    tau: f64,
    l: f64,
    regime: Regime,
    k0: f64,
    k_tau: f64,
}

impl StationaryLaw {
    /// Stationary variance `K(0)`.
    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// Stationary covariance at the delay, `K(τ)`.
    pub fn k_tau(&self) -> f64 {
        self.k_tau
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Stationary density `N(0, K(0))`.
    pub fn density(&self) -> Gaussian1d {
        Gaussian1d::new(0.0, self.k0).expect("stationary variance is positive and finite")
    }

    /// Stationary covariance `K(t) = K(0) g₁(t) - (σ²/2) g₂(t)` for
    /// `t ∈ [0, τ]`; the closed form is not established beyond the delay.
    pub fn k(&self, t: f64) -> Result<f64> {
        require(t >= 0.0 && t <= self.tau * (1.0 + 1e-12), || {
            format!(
                "stationary covariance is only defined on [0, tau = {}], got {t}",
                self.tau
            )
        })?;
        let (g1, g2) = g_pair(self.regime, self.l, t);
        Ok(self.k0 * g1 - 0.5 * self.sigma2 * g2)
    }
}

/// `(g₁(t), g₂(t))`: the basis solving `g'' = (a²-b²) g` with
/// `g₁(0) = 1, g₁'(0) = 0` and `g₂(0) = 0, g₂'(0) = 1`.
fn g_pair(regime: Regime, l: f64, t: f64) -> (f64, f64) {
    match regime {
        Regime::Hyperbolic => ((l * t).cosh(), (l * t).sinh() / l),
        Regime::Critical => (1.0, t),
        Regime::Trigonometric => ((l * t).cos(), (l * t).sin() / l),
    }
}

/// Variance `υ(t) = σ² ∫₀ᵗ X²(q) dq` of the solution at time `t` for any
/// deterministic history. Zero at `t = 0`, strictly increasing.
pub fn variance(p: &DelayParams, t: f64) -> Result<f64> {
    require_noise(p)?;
    require(t.is_finite() && t >= 0.0, || {
        format!("variance needs t >= 0, got {t}")
    })?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let fs = FundamentalSolution::new(p, t)?;
    Ok(p.sigma() * p.sigma() * fs.integrate_xx(0.0, t, 0.0)?)
}

/// Joint law of `(x(t), x(t-τ))` started from a deterministic history.
pub fn pair_law(p: &DelayParams, init: &InitialCondition, t: f64) -> Result<PairLaw> {
    require_noise(p)?;
    require(t.is_finite() && t >= 0.0, || {
        format!("pair law needs t >= 0, got {t}")
    })?;
    init.validate(p.tau())?;
    let tau = p.tau();
    let s2 = p.sigma() * p.sigma();
    let fs = FundamentalSolution::new(p, t.max(tau))?;

    let r00 = if t > 0.0 {
        s2 * fs.integrate_xx(0.0, t, 0.0)?
    } else {
        0.0
    };
    let (r01, r11) = if t > tau {
        (
            s2 * fs.integrate_xx(0.0, t - tau, tau)?,
            s2 * fs.integrate_xx(0.0, t - tau, 0.0)?,
        )
    } else {
        (0.0, 0.0)
    };
    let mean0 = fs.solution_map(init, t)?;
    let mean1 = if t >= tau {
        fs.solution_map(init, t - tau)?
    } else {
        init.value_at(t - tau)
    };
    Ok(PairLaw {
        mean: (mean0, mean1),
        cov: [[r00, r01], [r01, r11]],
        degenerate: t <= tau,
    })
}

/// Mean of `x(t-τ)` given `x(t) = x`:
/// `S_t φ(-τ) + (r_t(-τ,0)/υ(t)) (x - S_t φ(0))`.
///
/// For `t ≤ τ` the covariance term vanishes and the delayed coordinate is
/// the deterministic `φ(t-τ)` regardless of `x`.
pub fn conditional_mean(p: &DelayParams, init: &InitialCondition, x: f64, t: f64) -> Result<f64> {
    require(x.is_finite(), || format!("x must be finite, got {x}"))?;
    require(t > 0.0, || {
        format!("conditional mean needs t > 0 (the law at 0 is a point mass), got {t}")
    })?;
    let law = pair_law(p, init, t)?;
    let v = law.cov[0][0];
    require(v > 0.0, || format!("degenerate variance at t = {t}"))?;
    Ok(law.mean.1 + law.cov[0][1] / v * (x - law.mean.0))
}

/// Stationary law of the stable equation, in closed form.
///
/// With `l = √|a²-b²|` and the regime-matched `(g₁, g₂)`:
/// `K(0) = (σ²/2)(b g₂(τ) - 1)/(b g₁(τ) + a)` and
/// `K(t) = K(0) g₁(t) - (σ²/2) g₂(t)`, which satisfies the balance identity
/// `2a K(0) + 2b K(τ) + σ² = 0` and `K'(0) = -σ²/2`.
pub fn stationary_law(p: &DelayParams) -> Result<StationaryLaw> {
    require_noise(p)?;
    let classification = hayes_stable(p);
    if classification != Stability::Stable {
        return Err(Error::NoStationarySolution(format!(
            "parameters classify as {classification}"
        )));
    }
    let (a, b, tau) = (p.a(), p.b(), p.tau());
    let sigma2 = p.sigma() * p.sigma();
    let disc = a * a - b * b;
    let (regime, l) = if disc.abs() < 1e-10 {
        (Regime::Critical, 0.0)
    } else if disc > 0.0 {
        (Regime::Hyperbolic, disc.sqrt())
    } else {
        (Regime::Trigonometric, (-disc).sqrt())
    };
    let (g1, g2) = g_pair(regime, l, tau);
    let k0 = 0.5 * sigma2 * (b * g2 - 1.0) / (b * g1 + a);
    require(k0.is_finite() && k0 > 0.0, || {
        format!("stationary variance came out as {k0}")
    })?;
    let k_tau = k0 * g1 - 0.5 * sigma2 * g2;
    Ok(StationaryLaw {
        sigma2,
        tau,
        l,
        regime,
        k0,
        k_tau,
    })
}

/// The 2000-point uniform grid on `(0, 6τ]` used for entropy figures.
pub fn default_grid(p: &DelayParams) -> Vec<f64> {
    (1..=2000)
        .map(|k| 6.0 * p.tau() * (k as f64) / 2000.0)
        .collect()
}

/// Gibbs and conditional entropy along `times` for a deterministic history.
///
/// Per grid point: the law is `N(S_t φ(0), υ(t))`, `H_G` is its Gibbs
/// entropy, and `H_c` is its conditional entropy against the stationary
/// `N(0, K(0))` (so the parameters must be stable). `t = 0` is excluded
/// from the grid: υ(0) = 0 leaves no density to take an entropy of.
pub fn entropy_curve_point(
    p: &DelayParams,
    init: &InitialCondition,
    times: &[f64],
) -> Result<EntropyCurve> {
    init.validate(p.tau())?;
    require(init.is_deterministic(), || {
        "point-history entropy curve needs a deterministic history".to_string()
    })?;
    let law = stationary_law(p)?;
    validate_grid(times)?;
    let fstar = law.density();
    let fs = FundamentalSolution::new(p, *times.last().unwrap())?;
    let s2 = p.sigma() * p.sigma();

    let n = times.len();
    let mut mean = Vec::with_capacity(n);
    let mut var = Vec::with_capacity(n);
    let mut gibbs = Vec::with_capacity(n);
    let mut cond = Vec::with_capacity(n);
    let mut acc = quad::Compensated::new();
    let mut prev = 0.0;
    for &t in times {
        acc.add(fs.integrate_xx(prev, t, 0.0)?);
        prev = t;
        let v = s2 * acc.total();
        let m = fs.solution_map(init, t)?;
        let f = Gaussian1d::new(m, v)?;
        mean.push(m);
        var.push(v);
        gibbs.push(f.gibbs_entropy());
        cond.push(gaussian::conditional_entropy(&f, &fstar));
    }
    Ok(EntropyCurve {
        times: times.to_vec(),
        mean,
        variance: var,
        gibbs,
        conditional: Some(cond),
    })
}

/// Entropy curve for a Brownian-motion history with diffusion `σ̄`.
///
/// The state at time `t` is `N(0, σ̄² ∫_t^{t+τ} X²(q) dq + υ(t))`; for
/// `σ > 0` the variance is evaluated as
/// `(σ̄²/σ²) υ(t+τ) + (1 - σ̄²/σ²) υ(t)`. The conditional column is present
/// when a reference density exists: against `N(0, K(0))` for stable
/// parameters with noise, and against `N(0, 1)` in the marginal
/// noise-free case, where the law stays oscillatory instead of settling.
pub fn entropy_curve_brownian(
    p: &DelayParams,
    sigma_bar: f64,
    times: &[f64],
) -> Result<EntropyCurve> {
    require(sigma_bar.is_finite() && sigma_bar > 0.0, || {
        format!("sigma_bar must be positive, got {sigma_bar}")
    })?;
    let classification = hayes_stable(p);
    require(classification != Stability::Unstable, || {
        "entropy curve needs Stable or Marginal parameters, got Unstable".to_string()
    })?;
    validate_grid(times)?;
    let tau = p.tau();
    let s2 = p.sigma() * p.sigma();
    let sb2 = sigma_bar * sigma_bar;
    let fs = FundamentalSolution::new(p, times.last().unwrap() + tau)?;

    let fstar = match (classification, p.sigma() > 0.0) {
        (Stability::Stable, true) => Some(stationary_law(p)?.density()),
        (Stability::Marginal, false) => Some(Gaussian1d::new(0.0, 1.0)?),
        _ => None,
    };

    let n = times.len();
    let mut var = Vec::with_capacity(n);
    let mut gibbs = Vec::with_capacity(n);
    let mut cond = fstar.as_ref().map(|_| Vec::with_capacity(n));
    let mut acc0 = quad::Compensated::new();
    let mut acc1 = quad::Compensated::new();
    let (mut prev0, mut prev1) = (0.0, 0.0);
    for &t in times {
        acc0.add(fs.integrate_xx(prev0, t, 0.0)?);
        acc1.add(fs.integrate_xx(prev1, t + tau, 0.0)?);
        prev0 = t;
        prev1 = t + tau;
        let v = if p.sigma() > 0.0 {
            let ratio = sb2 / s2;
            ratio * (s2 * acc1.total()) + (1.0 - ratio) * (s2 * acc0.total())
        } else {
            sb2 * (acc1.total() - acc0.total())
        };
        let f = Gaussian1d::new(0.0, v)?;
        var.push(v);
        gibbs.push(f.gibbs_entropy());
        if let (Some(cond), Some(fstar)) = (cond.as_mut(), fstar.as_ref()) {
            cond.push(gaussian::conditional_entropy(&f, fstar));
        }
    }
    Ok(EntropyCurve {
        times: times.to_vec(),
        mean: vec![0.0; n],
        variance: var,
        gibbs,
        conditional: cond,
    })
}

/// Lower bound on the conditional entropy of the law started from a
/// mixture of deterministic histories:
/// `(1/2) ln(υ/K₀) + (1/2)(1 - υ/K₀) - Σ wᵢ [S_t φᵢ(0)]² / (2K₀)`.
///
/// Weights must be positive and sum to 1.
pub fn entropy_lower_bound(
    p: &DelayParams,
    mixture: &[(f64, InitialCondition)],
    t: f64,
) -> Result<f64> {
    require(!mixture.is_empty(), || "mixture is empty".to_string())?;
    require(t.is_finite() && t > 0.0, || {
        format!("entropy bound needs t > 0, got {t}")
    })?;
    let mut wsum = quad::Compensated::new();
    for (w, init) in mixture {
        require(w.is_finite() && *w > 0.0, || {
            format!("mixture weights must be positive, got {w}")
        })?;
        init.validate(p.tau())?;
        require(init.is_deterministic(), || {
            "entropy bound needs deterministic histories".to_string()
        })?;
        wsum.add(*w);
    }
    require((wsum.total() - 1.0).abs() <= 1e-12, || {
        format!("mixture weights sum to {}, not 1", wsum.total())
    })?;

    let law = stationary_law(p)?;
    let k0 = law.k0();
    let fs = FundamentalSolution::new(p, t.max(p.tau()))?;
    let v = p.sigma() * p.sigma() * fs.integrate_xx(0.0, t, 0.0)?;
    let mut msum = quad::Compensated::new();
    for (w, init) in mixture {
        let m = fs.solution_map(init, t)?;
        msum.add(w * m * m);
    }
    Ok(0.5 * (v / k0).ln() + 0.5 * (1.0 - v / k0) - msum.total() / (2.0 * k0))
}

/// Residual of the variance flow equation
/// `dυ/dt = 2a υ(t) + 2b r_t(-τ, 0) + σ²`, with the left side replaced by
/// a central difference of step `h`. The residual is `O(h²)` for exact
/// dynamics, so it measures how well the computed `υ` and `r_t` satisfy
/// the flow.
///
/// Needs `t - h > τ` so the difference stencil stays where `r_t` has its
/// generic form, and `h ≥ 1e-8` so rounding in `υ` does not swamp the
/// quotient.
pub fn fpe_residual(p: &DelayParams, t: f64, h: f64) -> Result<f64> {
    require_noise(p)?;
    require(h.is_finite() && h >= 1e-8, || {
        format!("step must be at least 1e-8, got {h}")
    })?;
    require(t.is_finite() && t - h > p.tau(), || {
        format!("need t - h > tau, got t = {t}, h = {h}, tau = {}", p.tau())
    })?;
    let s2 = p.sigma() * p.sigma();
    let fs = FundamentalSolution::new(p, t + h)?;
    let i_mid = fs.integrate_xx(t - h, t, 0.0)?;
    let i_hi = fs.integrate_xx(t, t + h, 0.0)?;
    let dv = s2 * (i_mid + i_hi) / (2.0 * h);
    let v = s2 * (fs.integrate_xx(0.0, t - h, 0.0)? + i_mid);
    let r = s2 * fs.integrate_xx(0.0, t - p.tau(), p.tau())?;
    Ok(dv - (2.0 * p.a() * v + 2.0 * p.b() * r + s2))
}

fn require_noise(p: &DelayParams) -> Result<()> {
    require(p.sigma() > 0.0, || {
        "operation needs sigma > 0 (the law has no density without noise)".to_string()
    })
}

fn validate_grid(times: &[f64]) -> Result<()> {
    require(!times.is_empty(), || "time grid is empty".to_string())?;
    require(times.iter().all(|t| t.is_finite()), || {
        "time grid contains non-finite entries".to_string()
    })?;
    require(times[0] > 0.0, || {
        format!(
            "time grid must start after 0 (the law at 0 has no density), got {}",
            times[0]
        )
    })?;
    require(times.windows(2).all(|w| w[0] < w[1]), || {
        "time grid must be strictly increasing".to_string()
    })?;
    Ok(())
}
