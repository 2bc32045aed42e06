//! Closed-form entropy algebra for scalar Gaussian densities.
//!
//! For `f = N(m1, v1)` and a reference `g = N(m2, v2)` the two entropy
//! functionals used throughout the crate reduce to:
//!
//! * Gibbs entropy: `H_G(f) = -∫ f ln f = 1/2 + (1/2) ln(2π v1)`,
//! * conditional entropy (negative Kullback-Leibler divergence):
//!   `H_c(f | g) = -∫ f ln(f/g)
//!              = (1/2) ln(v1/v2) + (1/2)(1 - v1/v2) - (m1-m2)²/(2 v2)`.
//!
//! `H_c` is always `<= 0` and vanishes exactly when `f = g`, which is what
//! makes it a Lyapunov functional for the processes in [`crate::ou`] and
//! [`crate::sdde`]. The two functionals are linked by the bridge identity
//! `H_c(f | g) = H_G(f) + ∫ f ln g`, whose closed-form residual is exposed
//! here as a self-check, along with the non-equilibrium combination
//! `H_NE = H_c(f | g) + H_G(g)` and a quadrature route for finite Gaussian
//! mixtures (the only place a numeric integral is needed).

use crate::error::{require, Result};
use crate::quad;

const LN_2PI: f64 = 1.8378770664093453;

/// Scalar Gaussian density, `N(mean, variance)` with `variance > 0`.
///
/// Construction validates the parameters, so every entropy operation on a
/// built value is total. Variances below `1e-300` are rejected rather than
/// clamped: the entropy diverges there and clamping would hide bugs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian1d {
    mean: f64,
    variance: f64,
}

impl Gaussian1d {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        require(mean.is_finite(), || format!("mean must be finite, got {mean}"))?;
        require(variance.is_finite() && variance >= 1e-300, || {
            format!("variance must be positive and >= 1e-300, got {variance}")
        })?;
        Ok(Self { mean, variance })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        let d = x - self.mean;
        -0.5 * (LN_2PI + self.variance.ln()) - d * d / (2.0 * self.variance)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    /// Gibbs entropy `1/2 + (1/2) ln(2π variance)`; independent of the mean.
    pub fn gibbs_entropy(&self) -> f64 {
        0.5 + 0.5 * (LN_2PI + self.variance.ln())
    }

    /// Conditional entropy `H_c(self | reference) = -∫ f ln(f/g) <= 0`,
    /// zero exactly when the two densities coincide.
    pub fn conditional_entropy(&self, reference: &Gaussian1d) -> f64 {
        let r = self.variance / reference.variance;
        let d = self.mean - reference.mean;
        0.5 * r.ln() + 0.5 * (1.0 - r) - d * d / (2.0 * reference.variance)
    }
}

/// Gibbs entropy of `g`; free-function form of [`Gaussian1d::gibbs_entropy`].
pub fn gibbs_entropy(g: &Gaussian1d) -> f64 {
    g.gibbs_entropy()
}

/// Conditional entropy of `f` relative to `g`; free-function form of
/// [`Gaussian1d::conditional_entropy`].
pub fn conditional_entropy(f: &Gaussian1d, g: &Gaussian1d) -> f64 {
    f.conditional_entropy(g)
}

/// Residual of the bridge identity `H_c(f | g) = H_G(f) + ∫ f ln g`,
/// computed as `H_G(f) - [H_c(f | g) - ∫ f ln g]` with the closed form
/// `∫ f ln g = -(1/2) ln(2π v2) - (v1 + (m1-m2)²)/(2 v2)`.
///
/// Exact arithmetic gives zero; the returned value is pure rounding noise
/// and serves as a cheap internal consistency check.
pub fn entropy_bridge_residual(f: &Gaussian1d, fstar: &Gaussian1d) -> f64 {
    let d = f.mean - fstar.mean;
    let cross =
        -0.5 * (LN_2PI + fstar.variance.ln()) - (f.variance + d * d) / (2.0 * fstar.variance);
    f.gibbs_entropy() - (f.conditional_entropy(fstar) - cross)
}

/// Non-equilibrium entropy `H_NE = H_c(f | fstar) + H_G(fstar)`.
pub fn h_ne(f: &Gaussian1d, fstar: &Gaussian1d) -> f64 {
    f.conditional_entropy(fstar) + fstar.gibbs_entropy()
}

/// Finite mixture of scalar Gaussians with positive weights summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    components: Vec<(f64, Gaussian1d)>,
}

impl GaussianMixture {
    /// Weights must be positive and sum to 1 within `1e-12`.
    pub fn new(components: Vec<(f64, Gaussian1d)>) -> Result<Self> {
        require(!components.is_empty(), || {
            "mixture needs at least one component".to_string()
        })?;
        let mut total = quad::Compensated::new();
        for (w, _) in &components {
            require(w.is_finite() && *w > 0.0, || {
                format!("mixture weights must be positive, got {w}")
            })?;
            total.add(*w);
        }
        require((total.total() - 1.0).abs() <= 1e-12, || {
            format!("mixture weights must sum to 1, got {}", total.total())
        })?;
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, Gaussian1d)] {
        &self.components
    }

    /// Log of the mixture density via log-sum-exp over the components.
    pub fn log_pdf(&self, x: f64) -> f64 {
        let mut max = f64::NEG_INFINITY;
        for (w, g) in &self.components {
            let t = w.ln() + g.log_pdf(x);
            if t > max {
                max = t;
            }
        }
        let mut sum = 0.0;
        for (w, g) in &self.components {
            sum += (w.ln() + g.log_pdf(x) - max).exp();
        }
        max + sum.ln()
    }
}

/// Conditional entropy `H_c(mix | fstar) = -∫ f ln(f/fstar)` of a mixture
/// density by adaptive quadrature to absolute tolerance `quad_tol`.
///
/// The integral is truncated to the envelope of the component `±10σ`
/// windows; Gaussian mass beyond ten standard deviations is below `1e-22`,
/// far under any useful tolerance. By Jensen's inequality the result is
/// bounded below by `Σ wᵢ H_c(gᵢ | fstar)`.
pub fn mixture_conditional_entropy(
    mix: &GaussianMixture,
    fstar: &Gaussian1d,
    quad_tol: f64,
) -> Result<f64> {
    require(quad_tol.is_finite() && quad_tol > 0.0, || {
        format!("quadrature tolerance must be positive, got {quad_tol}")
    })?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (_, g) in mix.components() {
        let sd = g.variance().sqrt();
        lo = lo.min(g.mean() - 10.0 * sd);
        hi = hi.max(g.mean() + 10.0 * sd);
    }
    let mut integrand = |x: f64| {
        let lf = mix.log_pdf(x);
        lf.exp() * (fstar.log_pdf(x) - lf)
    };
    quad::adaptive(&mut integrand, lo, hi, quad_tol)
}
