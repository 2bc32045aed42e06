//! Entropy evolution for scalar linear stochastic differential equations,
//! with and without delay.
//!
//! The library computes two functionals of a probability density `f`:
//! the Gibbs entropy `H_G(f) = -∫ f ln f` and the conditional entropy
//! `H_c(f | f*) = -∫ f ln(f / f*)` relative to a reference density `f*`
//! (the negative Kullback-Leibler divergence). For the processes treated
//! here every marginal law is Gaussian, so both functionals have closed
//! forms and the time evolution of the law reduces to a mean and a
//! variance flow.
//!
//! Modules:
//!
//! * [`gaussian`]: the closed-form entropy algebra for scalar Gaussians
//!   and finite Gaussian mixtures.
//! * [`ou`]: the Ornstein-Uhlenbeck process `dx = a x dt + σ dw`:
//!   variance flow, transition and stationary densities, entropy curves,
//!   and the Gibbs trend trichotomy.
//! * [`dde`]: deterministic delay machinery for `x' = a x(t) + b x(t-τ)`:
//!   the fundamental solution `X(t)` as piecewise polynomials, the solution
//!   map `S_t φ(0)`, kink-aware quadrature of `X(q) X(q+lag)`, and Hayes
//!   stability classification.
//! * [`sdde`]: the Gaussian law of `dx = (a x(t) + b x(t-τ)) dt + σ dw`:
//!   variance `υ(t)`, the pair law of `(x(t), x(t-τ))`, the stationary
//!   covariance `K(t)` in closed form, entropy curves for deterministic and
//!   Brownian initial histories, Jensen lower bounds, and a Fokker-Planck
//!   residual check.
//! * [`mc`]: a seeded, schedule-independent Monte Carlo engine (exact OU
//!   transitions and Euler-Maruyama with a delay buffer) plus nonparametric
//!   entropy estimators, serving as the independent cross-check of every
//!   analytic formula.

pub mod dde;
mod error;
pub mod gaussian;
pub mod mc;
pub mod ou;
mod quad;
pub mod sdde;

pub mod book;
mod curve;

pub use curve::{count_strict_extrema, EntropyCurve};
pub use error::{Error, Result};
