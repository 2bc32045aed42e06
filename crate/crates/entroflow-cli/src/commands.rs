//! The five subcommands. Each resolves flags against an optional config
//! file, runs the library routines, writes the CSV or report, and drops a
//! manifest sidecar next to every output file.

use crate::args;
use crate::config::{self, ConfigFile};
use crate::errors::CliError;
use crate::output::{float_field, render_csv, write_text, RunManifest};
use crate::verify;
use entroflow::count_strict_extrema;
use entroflow::dde::{hayes_report, DelayParams, FundamentalSolution, InitialCondition, Stability};
use entroflow::gaussian::{conditional_entropy, gibbs_entropy, Gaussian1d};
use entroflow::ou::OuParams;
use entroflow::sdde;

/// Band below which a finite difference does not count as a sign change;
/// shared with the curve extremum detector.
const EXTREMUM_BAND: f64 = 1e-9;

/// `points` times excluding 0: `t_k = t_max·k/points`. Entropy columns
/// are undefined at t = 0 for point starts, so these grids skip it.
fn grid_after_zero(t_max: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CliError::Usage(format!("--t-max must be positive, got {t_max}")));
    }
    if points < 1 {
        return Err(CliError::Usage("--points must be at least 1".to_string()));
    }
    Ok((1..=points)
        .map(|k| t_max * k as f64 / points as f64)
        .collect())
}

/// `points` times including both endpoints: `t_k = t_max·k/(points-1)`.
fn grid_from_zero(t_max: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CliError::Usage(format!("--t-max must be positive, got {t_max}")));
    }
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".to_string()));
    }
    Ok((0..points)
        .map(|k| t_max * k as f64 / (points - 1) as f64)
        .collect())
}

/// One row of the t,mean,variance,H_G,H_c table for an Ornstein-Uhlenbeck
/// start `N(m0, v0)`. Shared by `cmd_ou` and the no-delay dispatch of
/// `cmd_entropy` so the two commands agree byte for byte.
fn ou_rows(
    params: &OuParams,
    init_mean: f64,
    init_var: f64,
    grid: &[f64],
) -> Result<(Vec<[f64; 5]>, f64), CliError> {
    let fstar = params.stationary()?;
    let mut rows = Vec::with_capacity(grid.len());
    for &t in grid {
        let (m, v) = params.flow(init_mean, init_var, t);
        let law = Gaussian1d::new(m, v)?;
        rows.push([
            t,
            m,
            v,
            gibbs_entropy(&law),
            conditional_entropy(&law, &fstar),
        ]);
    }
    Ok((rows, fstar.variance()))
}

pub fn cmd_ou(a: &args::OuArgs) -> Result<(), CliError> {
    let keys = [
        "a", "sigma", "init-mean", "init-var", "t-max", "points", "out",
    ];
    let cfg = ConfigFile::load(a.config.as_deref(), &keys)?;
    let pa = config::require(a.a, cfg.float("a")?, "a")?;
    let sigma = config::require(a.sigma, cfg.float("sigma")?, "sigma")?;
    let init_mean = a.init_mean.or(cfg.float("init-mean")?).unwrap_or(0.0);
    let init_var = a.init_var.or(cfg.float("init-var")?).unwrap_or(0.0);
    let t_max = config::require(a.t_max, cfg.float("t-max")?, "t-max")?;
    let points = a.points.or(cfg.integer("points")?).unwrap_or(500);
    let out = config::require(a.out.clone(), cfg.string("out"), "out")?;

    if !(init_var.is_finite() && init_var >= 0.0) {
        return Err(CliError::Usage(format!(
            "--init-var must be nonnegative, got {init_var}"
        )));
    }
    let params = OuParams::new(pa, sigma)?;
    let grid = grid_after_zero(t_max, points)?;
    let (rows, vstar) = ou_rows(&params, init_mean, init_var, &grid)?;

    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|x| float_field(*x)).collect())
        .collect();
    write_text(&out, &render_csv(&["t", "mean", "variance", "H_G", "H_c"], &table))?;

    let mut manifest = RunManifest::new("ou");
    manifest
        .param_float("a", pa)
        .param_float("sigma", sigma)
        .param_float("init-mean", init_mean)
        .param_float("init-var", init_var)
        .param_float("t-max", t_max)
        .param("points", points.to_string())
        .param("out", out.clone());
    manifest.outputs.push(out.clone());
    manifest.k0 = Some(vstar);
    manifest.write_beside(&out)?;
    Ok(())
}

/// Reads a tabulated history file: one `s,value` pair per line, knots
/// strictly increasing and covering [-τ, 0].
fn read_phi_file(path: &str) -> Result<InitialCondition, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Run(format!("could not read history file {path}: {e}")))?;
    let mut knots = Vec::new();
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((s, v)) = line.split_once(',') else {
            return Err(CliError::Run(format!(
                "{path}:{}: expected s,value got {raw:?}",
                lineno + 1
            )));
        };
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Run(format!("{path}:{}: not a number: {x:?}", lineno + 1)))
        };
        knots.push(parse(s)?);
        values.push(parse(v)?);
    }
    Ok(InitialCondition::TabulatedHistory { knots, values })
}

pub fn cmd_dde(a: &args::DdeArgs) -> Result<(), CliError> {
    let keys = ["a", "b", "tau", "phi-const", "phi-file", "t-max", "points", "out"];
    let cfg = ConfigFile::load(a.config.as_deref(), &keys)?;
    let pa = config::require(a.a, cfg.float("a")?, "a")?;
    let pb = config::require(a.b, cfg.float("b")?, "b")?;
    let tau = config::require(a.tau, cfg.float("tau")?, "tau")?;
    let t_max = config::require(a.t_max, cfg.float("t-max")?, "t-max")?;
    let points = a.points.or(cfg.integer("points")?).unwrap_or(500);
    let out = config::require(a.out.clone(), cfg.string("out"), "out")?;
    let phi_const = a.phi_const.or(cfg.float("phi-const")?);
    let phi_file = a.phi_file.clone().or(cfg.string("phi-file"));

    let init = match (phi_const, phi_file.as_deref()) {
        (Some(c), None) => InitialCondition::PointHistory(c),
        (None, Some(path)) => read_phi_file(path)?,
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give exactly one of --phi-const and --phi-file, not both".to_string(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "a history is required: --phi-const or --phi-file".to_string(),
            ))
        }
    };

    let params = DelayParams::new(pa, pb, tau, 0.0)?;
    init.validate(tau)?;
    let grid = grid_from_zero(t_max, points)?;
    let fs = FundamentalSolution::new(&params, t_max.max(tau))?;
    let mut table = Vec::with_capacity(grid.len());
    for &t in &grid {
        let x = fs.solution_map(&init, t)?;
        table.push(vec![float_field(t), float_field(x)]);
    }
    write_text(&out, &render_csv(&["t", "x"], &table))?;

    let mut manifest = RunManifest::new("dde");
    manifest
        .param_float("a", pa)
        .param_float("b", pb)
        .param_float("tau", tau)
        .param_float("t-max", t_max)
        .param("points", points.to_string())
        .param("out", out.clone());
    if let Some(c) = phi_const {
        manifest.param_float("phi-const", c);
    }
    if let Some(path) = phi_file {
        manifest.param("phi-file", path);
    }
    manifest.outputs.push(out.clone());
    manifest.write_beside(&out)?;
    Ok(())
}

fn hayes_report_lines(params: &DelayParams) -> String {
    let report = hayes_report(params);
    let opt = |m: Option<f64>| m.map_or("n/a".to_string(), float_field);
    let mut text = String::new();
    text.push_str(&format!(
        "margin 1 (1 - a*tau): {}\n",
        opt(report.margins[0])
    ));
    text.push_str(&format!(
        "margin 2 (-(a + b)*tau): {}\n",
        opt(report.margins[1])
    ));
    text.push_str(&format!(
        "margin 3 (b*tau + a*tau*cos(kappa) + kappa*sin(kappa)): {}\n",
        opt(report.margins[2])
    ));
    text.push_str(&format!("kappa: {}\n", opt(report.kappa)));
    text.push_str(&format!("classification: {}\n", report.classification));
    text
}

pub fn cmd_stability(a: &args::StabilityArgs) -> Result<(), CliError> {
    let keys = ["a", "b", "tau"];
    let cfg = ConfigFile::load(a.config.as_deref(), &keys)?;
    let pa = config::require(a.a, cfg.float("a")?, "a")?;
    let pb = config::require(a.b, cfg.float("b")?, "b")?;
    let tau = config::require(a.tau, cfg.float("tau")?, "tau")?;
    let params = DelayParams::new(pa, pb, tau, 0.0)?;
    print!("{}", hayes_report_lines(&params));
    Ok(())
}

pub fn cmd_entropy(a: &args::EntropyArgs) -> Result<(), CliError> {
    let keys = [
        "a", "b", "tau", "sigma", "phi-const", "phi-file", "brownian", "t-max", "points", "out",
    ];
    let cfg = ConfigFile::load(a.config.as_deref(), &keys)?;
    let pa = config::require(a.a, cfg.float("a")?, "a")?;
    let pb = config::require(a.b, cfg.float("b")?, "b")?;
    let tau = config::require(a.tau, cfg.float("tau")?, "tau")?;
    let sigma = config::require(a.sigma, cfg.float("sigma")?, "sigma")?;
    let t_max = config::require(a.t_max, cfg.float("t-max")?, "t-max")?;
    let points = a.points.or(cfg.integer("points")?).unwrap_or(500);
    let out = config::require(a.out.clone(), cfg.string("out"), "out")?;
    let phi_const = a.phi_const.or(cfg.float("phi-const")?);
    let phi_file = a.phi_file.clone().or(cfg.string("phi-file"));
    let brownian = a.brownian.or(cfg.float("brownian")?);

    let params = DelayParams::new(pa, pb, tau, sigma)?;
    let report = hayes_report(&params);
    if report.classification == Stability::Unstable {
        eprint!("{}", hayes_report_lines(&params));
        return Err(CliError::Run(
            "parameters are unstable; no entropy curve exists".to_string(),
        ));
    }

    let mut manifest = RunManifest::new("entropy");
    manifest
        .param_float("a", pa)
        .param_float("b", pb)
        .param_float("tau", tau)
        .param_float("sigma", sigma)
        .param_float("t-max", t_max)
        .param("points", points.to_string())
        .param("out", out.clone());

    let grid = grid_after_zero(t_max, points)?;
    // Columns: variance, H_G, optional H_c per grid point.
    let (variance, gibbs, conditional, k0): (Vec<f64>, Vec<f64>, Option<Vec<f64>>, Option<f64>);

    match (phi_const, phi_file.as_deref(), brownian) {
        (Some(c), None, None) if pb == 0.0 => {
            // No delayed feedback: dispatch to the same closed-form rows
            // as cmd_ou so the shared columns are byte-identical.
            manifest.param_float("phi-const", c);
            let ou = OuParams::new(pa, sigma)?;
            let (rows, vstar) = ou_rows(&ou, c, 0.0, &grid)?;
            variance = rows.iter().map(|r| r[2]).collect();
            gibbs = rows.iter().map(|r| r[3]).collect();
            conditional = Some(rows.iter().map(|r| r[4]).collect());
            k0 = Some(vstar);
        }
        (Some(c), None, None) => {
            manifest.param_float("phi-const", c);
            let init = InitialCondition::PointHistory(c);
            let curve = sdde::entropy_curve_point(&params, &init, &grid)?;
            k0 = Some(sdde::stationary_law(&params)?.k0());
            variance = curve.variance;
            gibbs = curve.gibbs;
            conditional = curve.conditional;
        }
        (None, Some(path), None) => {
            manifest.param("phi-file", path.to_string());
            let init = read_phi_file(path)?;
            init.validate(tau)?;
            let curve = sdde::entropy_curve_point(&params, &init, &grid)?;
            k0 = Some(sdde::stationary_law(&params)?.k0());
            variance = curve.variance;
            gibbs = curve.gibbs;
            conditional = curve.conditional;
        }
        (None, None, Some(sigma_bar)) => {
            manifest.param_float("brownian", sigma_bar);
            let curve = sdde::entropy_curve_brownian(&params, sigma_bar, &grid)?;
            k0 = if report.classification == Stability::Stable && sigma > 0.0 {
                Some(sdde::stationary_law(&params)?.k0())
            } else {
                None
            };
            variance = curve.variance;
            gibbs = curve.gibbs;
            conditional = curve.conditional;
        }
        (None, None, None) => {
            return Err(CliError::Usage(
                "an initial condition is required: --phi-const, --phi-file, or --brownian"
                    .to_string(),
            ))
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --phi-const, --phi-file, and --brownian".to_string(),
            ))
        }
    }

    let mut table = Vec::with_capacity(grid.len());
    for (i, &t) in grid.iter().enumerate() {
        let hc = conditional
            .as_ref()
            .map_or(String::new(), |c| float_field(c[i]));
        table.push(vec![
            float_field(t),
            float_field(variance[i]),
            float_field(gibbs[i]),
            hc,
        ]);
    }
    write_text(&out, &render_csv(&["t", "variance", "H_G", "H_c"], &table))?;

    manifest.k0 = k0;
    manifest.h_gibbs_non_monotone = Some(count_strict_extrema(&gibbs, EXTREMUM_BAND) > 0);
    manifest.h_conditional_non_monotone = conditional
        .as_ref()
        .map(|c| count_strict_extrema(c, EXTREMUM_BAND) > 0);
    manifest.outputs.push(out.clone());
    manifest.write_beside(&out)?;
    Ok(())
}

pub fn cmd_verify(a: &args::VerifyArgs, threads: usize) -> Result<(), CliError> {
    let keys = ["suite", "seed", "out"];
    let cfg = ConfigFile::load(a.config.as_deref(), &keys)?;
    let suite = config::require(a.suite.clone(), cfg.string("suite"), "suite")?;
    let seed = a.seed.or(cfg.integer("seed")?).unwrap_or(42);
    let out = a.out.clone().or(cfg.string("out"));

    let (report, passed, uses_seed) = match suite.as_str() {
        "identities" => {
            let (r, p) = verify::identities(seed);
            (r, p, true)
        }
        "mc-vs-analytic" => {
            let (r, p) = verify::mc_vs_analytic(seed, threads);
            (r, p, true)
        }
        "fpe-residual" => {
            let (r, p) = verify::fpe_residual();
            (r, p, false)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite {other:?}; expected identities, mc-vs-analytic, or fpe-residual"
            )))
        }
    };

    print!("{report}");
    if let Some(out) = out {
        write_text(&out, &report)?;
        let mut manifest = RunManifest::new("verify");
        manifest
            .param("suite", suite.clone())
            .param("seed", seed.to_string())
            .param("out", out.clone());
        manifest.master_seed = uses_seed.then_some(seed);
        manifest.outputs.push(out.clone());
        manifest.write_beside(&out)?;
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::Run(format!("verification suite {suite} failed")))
    }
}
