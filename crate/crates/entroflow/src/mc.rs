//! Seeded Monte Carlo engine: exact Ornstein-Uhlenbeck sampling,
//! Euler-Maruyama integration of the delay equation, and entropy
//! estimators. This is the sampling-based route against which every
//! closed-form result in the crate can be cross-checked.
//!
//! Reproducibility contract: trajectory `i` draws from a counter-based
//! stream derived from `(master_seed, i)`, trajectories land in the sample
//! matrix by index, and all reductions run sequentially in trajectory
//! order with compensated summation. Summaries are therefore bit-identical
//! for a fixed `(config, master_seed)` no matter how many worker threads
//! run the trajectories.

use crate::dde::{DelayParams, InitialCondition};
use crate::error::{require, Error, Result};
use crate::gaussian::{self, Gaussian1d};
use crate::ou::OuParams;
use crate::quad::Compensated;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Starting law for the exact Ornstein-Uhlenbeck sampler.
#[derive(Debug, Clone)]
pub enum OuInit {
    /// All trajectories start at the same point.
    Point(f64),
    /// Each trajectory draws its start independently from this density
    /// (one extra normal draw per trajectory, before any step draws).
    Gaussian(Gaussian1d),
}

/// Which process to simulate, with its starting condition.
#[derive(Debug, Clone)]
pub enum Model {
    Ou { params: OuParams, init: OuInit },
    Sdde {
        params: DelayParams,
        init: InitialCondition,
    },
}

/// A fully specified, validated simulation run.
#[derive(Debug, Clone)]
pub struct SimConfig {
    model: Model,
    dt: f64,
    t_max: f64,
    output_times: Vec<f64>,
    n_traj: usize,
    master_seed: u64,
    threads: usize,
    histogram_bins: Option<usize>,
}

impl SimConfig {
    /// Validates and freezes a run description.
    ///
    /// Output times must be strictly increasing, lie on the `dt` grid
    /// within `1e-6·dt`, and stay within `[0, t_max]`. For a delay model,
    /// `τ/dt` must be an integer (within `1e-9` relative) so the delayed
    /// value is always a stored grid value rather than an interpolation.
    pub fn new(
        model: Model,
        dt: f64,
        t_max: f64,
        output_times: Vec<f64>,
        n_traj: usize,
        master_seed: u64,
    ) -> Result<Self> {
        require(dt.is_finite() && dt > 0.0, || {
            format!("dt must be positive, got {dt}")
        })?;
        require(t_max.is_finite() && t_max >= dt, || {
            format!("t_max must be at least dt, got {t_max}")
        })?;
        require(n_traj >= 2, || {
            format!("need at least 2 trajectories for sample statistics, got {n_traj}")
        })?;
        require(!output_times.is_empty(), || {
            "no output times requested".to_string()
        })?;
        require(output_times.iter().all(|t| t.is_finite() && *t >= 0.0), || {
            "output times must be finite and nonnegative".to_string()
        })?;
        require(output_times.windows(2).all(|w| w[0] < w[1]), || {
            "output times must be strictly increasing".to_string()
        })?;
        for &t in &output_times {
            let k = (t / dt).round();
            require((k * dt - t).abs() <= 1e-6 * dt, || {
                format!("output time {t} does not lie on the dt = {dt} grid")
            })?;
        }
        let last = *output_times.last().unwrap();
        require(last <= t_max * (1.0 + 1e-12), || {
            format!("output time {last} exceeds t_max = {t_max}")
        })?;
        match &model {
            Model::Ou { init, .. } => {
                if let OuInit::Point(c) = init {
                    require(c.is_finite(), || format!("start point must be finite, got {c}"))?;
                }
            }
            Model::Sdde { params, init } => {
                init.validate(params.tau())?;
                let n = (params.tau() / dt).round();
                require(
                    n >= 1.0 && (n * dt - params.tau()).abs() <= 1e-9 * params.tau(),
                    || {
                        format!(
                            "tau = {} is not an integer multiple of dt = {dt}",
                            params.tau()
                        )
                    },
                )?;
            }
        }
        Ok(Self {
            model,
            dt,
            t_max,
            output_times,
            n_traj,
            master_seed,
            threads: 0,
            histogram_bins: None,
        })
    }

    /// Caps the worker thread count; `0` (the default) lets the runtime
    /// pick. The results are identical either way, only the wall time
    /// changes.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    /// Attaches per-output-time histograms with this many bins to the
    /// summary.
    pub fn with_histogram_bins(mut self, n_bins: usize) -> Result<Self> {
        require(n_bins >= 10, || {
            format!("need at least 10 bins, got {n_bins}")
        })?;
        self.histogram_bins = Some(n_bins);
        Ok(self)
    }

    pub fn output_times(&self) -> &[f64] {
        &self.output_times
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_traj(&self) -> usize {
        self.n_traj
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    fn output_indices(&self) -> Vec<usize> {
        self.output_times
            .iter()
            .map(|t| (t / self.dt).round() as usize)
            .collect()
    }
}

/// Equal-width histogram over the sample range.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
}

impl Histogram {
    /// Bins `samples` into `n_bins` equal-width bins spanning their range.
    pub fn from_samples(samples: &[f64], n_bins: usize) -> Result<Self> {
        require(n_bins >= 1, || "need at least one bin".to_string())?;
        require(!samples.is_empty(), || "no samples to bin".to_string())?;
        require(samples.iter().all(|x| x.is_finite()), || {
            "samples contain non-finite values".to_string()
        })?;
        let min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max <= min {
            return Err(Error::DegenerateSamples(format!(
                "all samples equal {min}; no range to bin"
            )));
        }
        let mut edges: Vec<f64> = (0..=n_bins)
            .map(|i| min + (max - min) * i as f64 / n_bins as f64)
            .collect();
        edges[n_bins] = max;
        let mut counts = vec![0u64; n_bins];
        let scale = n_bins as f64 / (max - min);
        for &x in samples {
            let bin = (((x - min) * scale) as usize).min(n_bins - 1);
            counts[bin] += 1;
        }
        Ok(Self { edges, counts })
    }

    /// Bin boundaries, `n_bins + 1` of them.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Plug-in differential entropy `-Σ p̂ᵢ ln(p̂ᵢ/Δᵢ)`; empty bins
    /// contribute nothing. The piecewise-constant density model biases the
    /// value by `O(Δ²)` for smooth densities.
    pub fn entropy(&self) -> f64 {
        let n: u64 = self.counts.iter().sum();
        let mut acc = Compensated::new();
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = c as f64 / n as f64;
            let width = self.edges[i + 1] - self.edges[i];
            acc.add(-p * (p / width).ln());
        }
        acc.total()
    }
}

/// Per-output-time sample statistics of one simulation run, plus the raw
/// sample matrix for the entropy estimators.
#[derive(Debug, Clone)]
pub struct EnsembleSummary {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    /// Unbiased sample variance.
    pub variance: Vec<f64>,
    pub se_mean: Vec<f64>,
    pub se_variance: Vec<f64>,
    pub histograms: Option<Vec<Histogram>>,
    /// `samples[time_index][trajectory_index]`, in trajectory order.
    pub samples: Vec<Vec<f64>>,
}

/// Samples the Ornstein-Uhlenbeck process by its exact transition law:
/// `x_{k+1} = e^{a·dt} x_k + N(0, υ(dt))`. The marginal at every grid time
/// is exact regardless of `dt`.
pub fn simulate_ou_exact(cfg: &SimConfig) -> Result<EnsembleSummary> {
    let (params, init) = match &cfg.model {
        Model::Ou { params, init } => (*params, init.clone()),
        Model::Sdde { .. } => {
            return Err(Error::Domain(
                "simulate_ou_exact needs an OU model, got a delay model".to_string(),
            ))
        }
    };
    let out_idx = cfg.output_indices();
    let last = *out_idx.last().unwrap();
    let decay = (params.a() * cfg.dt).exp();
    let step_sd = params.variance(cfg.dt).sqrt();

    let rows = run_trajectories(cfg, move |rng| {
        let mut x = match &init {
            OuInit::Point(c) => *c,
            OuInit::Gaussian(g) => {
                let z: f64 = rng.sample(StandardNormal);
                g.mean() + g.variance().sqrt() * z
            }
        };
        let mut out = Vec::with_capacity(out_idx.len());
        let mut next = 0;
        for k in 0..=last {
            if out_idx[next] == k {
                out.push(x);
                next += 1;
                if next == out_idx.len() {
                    break;
                }
            }
            let z: f64 = rng.sample(StandardNormal);
            x = decay * x + step_sd * z;
        }
        Ok(out)
    })?;
    summarize(cfg, rows)
}

/// Integrates the delay equation by Euler-Maruyama on the `dt` grid:
/// `x_{k+1} = x_k + (a x_k + b x_{k-N}) dt + σ √dt ξ_k` with the delay
/// buffer `N = τ/dt`.
///
/// Deterministic histories are sampled at the grid knots; a Brownian
/// history is built per trajectory from cumulative normal increments
/// starting at `x(-τ) = 0` (those draws precede the step draws in the
/// trajectory's stream). Aborts with a blow-up error when any trajectory
/// leaves `|x| ≤ 1e100`.
pub fn simulate_sdde_em(cfg: &SimConfig) -> Result<EnsembleSummary> {
    let (params, init) = match &cfg.model {
        Model::Sdde { params, init } => (*params, init.clone()),
        Model::Ou { .. } => {
            return Err(Error::Domain(
                "simulate_sdde_em needs a delay model, got an OU model".to_string(),
            ))
        }
    };
    let out_idx = cfg.output_indices();
    let last = *out_idx.last().unwrap();
    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();
    let n_delay = (params.tau() / dt).round() as usize;
    let (a, b, sigma) = (params.a(), params.b(), params.sigma());

    // For a deterministic history the initial delay buffer is shared by
    // all trajectories; only the Brownian history is drawn per trajectory.
    let fixed_start: Option<(Vec<f64>, f64)> = if init.is_deterministic() {
        let ring: Vec<f64> = (0..n_delay)
            .map(|j| init.value_at(-params.tau() + j as f64 * dt))
            .collect();
        Some((ring, init.value_at(0.0)))
    } else {
        None
    };
    let sigma_bar = match &init {
        InitialCondition::BrownianHistory { sigma_bar } => *sigma_bar,
        _ => 0.0,
    };

    let rows = run_trajectories(cfg, move |rng| {
        let (mut ring, mut x) = match &fixed_start {
            Some((ring, x0)) => (ring.clone(), *x0),
            None => {
                let mut ring = vec![0.0; n_delay];
                let mut w = 0.0;
                for slot in ring.iter_mut().skip(1) {
                    let z: f64 = rng.sample(StandardNormal);
                    w += sigma_bar * sqrt_dt * z;
                    *slot = w;
                }
                let z: f64 = rng.sample(StandardNormal);
                (ring, w + sigma_bar * sqrt_dt * z)
            }
        };
        let mut out = Vec::with_capacity(out_idx.len());
        let mut next = 0;
        for k in 0..=last {
            if out_idx[next] == k {
                out.push(x);
                next += 1;
                if next == out_idx.len() {
                    break;
                }
            }
            let delayed = ring[k % n_delay];
            let z: f64 = rng.sample(StandardNormal);
            let x_new = x + (a * x + b * delayed) * dt + sigma * sqrt_dt * z;
            if !x_new.is_finite() || x_new.abs() > 1e100 {
                return Err(Error::BlowUp {
                    t: (k + 1) as f64 * dt,
                });
            }
            ring[k % n_delay] = x;
            x = x_new;
        }
        Ok(out)
    })?;
    summarize(cfg, rows)
}

/// Gibbs entropy by the Gaussian plug-in `1/2 + (1/2) ln(2π s²)` with the
/// unbiased sample variance. Exact up to sampling error here because the
/// linear dynamics keep every marginal Gaussian.
pub fn estimate_entropy_gaussian_plugin(samples: &[f64]) -> Result<f64> {
    require(samples.len() >= 2, || {
        format!("need at least 2 samples, got {}", samples.len())
    })?;
    let (mean, var) = mean_and_variance(samples);
    let g = Gaussian1d::new(mean, var).map_err(|_| {
        Error::DegenerateSamples(format!("sample variance {var} admits no density"))
    })?;
    Ok(g.gibbs_entropy())
}

/// Nonparametric entropy from an equal-width histogram; see
/// [`Histogram::entropy`] for the estimator and its bias.
pub fn estimate_entropy_histogram(samples: &[f64], n_bins: usize) -> Result<f64> {
    require(n_bins >= 10, || {
        format!("need at least 10 bins, got {n_bins}")
    })?;
    require(samples.len() >= 1000, || {
        format!("need at least 1000 samples, got {}", samples.len())
    })?;
    Ok(Histogram::from_samples(samples, n_bins)?.entropy())
}

/// Conditional entropy against `fstar` by the Gaussian plug-in: fits
/// `N(m̂, s²)` to the samples and evaluates the closed form.
pub fn estimate_conditional_entropy(samples: &[f64], fstar: &Gaussian1d) -> Result<f64> {
    require(samples.len() >= 1000, || {
        format!("need at least 1000 samples, got {}", samples.len())
    })?;
    let (mean, var) = mean_and_variance(samples);
    let fit = Gaussian1d::new(mean, var).map_err(|_| {
        Error::DegenerateSamples(format!("sample variance {var} admits no density"))
    })?;
    Ok(gaussian::conditional_entropy(&fit, fstar))
}

/// Runs one closure per trajectory on a bounded pool and returns the
/// per-trajectory output rows in trajectory order.
fn run_trajectories<F>(cfg: &SimConfig, simulate_one: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<f64>> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Domain(format!("could not start worker pool: {e}")))?;
    let master_seed = cfg.master_seed;
    pool.install(|| {
        (0..cfg.n_traj as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
                rng.set_stream(i);
                simulate_one(&mut rng)
            })
            .collect::<Result<Vec<_>>>()
    })
}

/// Sequential, trajectory-ordered reduction of the sample matrix.
fn summarize(cfg: &SimConfig, rows: Vec<Vec<f64>>) -> Result<EnsembleSummary> {
    let n_times = cfg.output_times.len();
    let n = cfg.n_traj;
    let mut samples = Vec::with_capacity(n_times);
    let mut mean = Vec::with_capacity(n_times);
    let mut variance = Vec::with_capacity(n_times);
    let mut se_mean = Vec::with_capacity(n_times);
    let mut se_variance = Vec::with_capacity(n_times);
    for ti in 0..n_times {
        let column: Vec<f64> = rows.iter().map(|r| r[ti]).collect();
        let (m, v) = mean_and_variance(&column);
        mean.push(m);
        variance.push(v);
        se_mean.push((v / n as f64).sqrt());
        se_variance.push(v * (2.0 / (n - 1) as f64).sqrt());
        samples.push(column);
    }
    let histograms = match cfg.histogram_bins {
        Some(bins) => Some(
            samples
                .iter()
                .map(|col| Histogram::from_samples(col, bins))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(EnsembleSummary {
        times: cfg.output_times.clone(),
        mean,
        variance,
        se_mean,
        se_variance,
        histograms,
        samples,
    })
}

/// Two-pass compensated mean and unbiased variance.
fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mut s = Compensated::new();
    for &x in xs {
        s.add(x);
    }
    let mean = s.total() / n;
    let mut q = Compensated::new();
    for &x in xs {
        let d = x - mean;
        q.add(d * d);
    }
    (mean, q.total() / (n - 1.0))
}
