//! End-to-end tests of the binary: exit codes, CSV layout, manifest
//! reproducibility, config-file merging, and the π-literal flags.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entroflow"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = bin().args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Parses a CSV produced by the tool into (header, column-major floats);
/// empty fields become NaN.
fn read_csv(path: &PathBuf) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'), "CSV must use LF line endings");
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for line in lines {
        for (i, field) in line.split(',').enumerate() {
            cols[i].push(if field.is_empty() {
                f64::NAN
            } else {
                field.parse().unwrap()
            });
        }
    }
    (header, cols)
}

#[test]
fn usage_errors_exit_2() {
    // Missing required flag.
    let r = run(&["ou", "--sigma", "1", "--t-max", "2", "--out", "/dev/null"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(r.stderr.contains("--a"));
    // Unparseable number.
    let r = run(&["stability", "--a", "zero", "--b", "-1", "--tau", "1"]);
    assert_eq!(r.code, 2);
    // Unknown verify suite.
    let r = run(&["verify", "--suite", "nope"]);
    assert_eq!(r.code, 2);
    // Unknown subcommand (clap's own exit code).
    let r = run(&["frobnicate"]);
    assert_eq!(r.code, 2);
    // Both history sources at once.
    let dir = tmp("usage");
    let out = dir.join("x.csv");
    let r = run(&[
        "dde", "--a", "0", "--b", "-1", "--tau", "1", "--phi-const", "1", "--phi-file", "h.csv",
        "--t-max", "1", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 2);
}

#[test]
fn domain_errors_exit_1() {
    let dir = tmp("domain");
    let out = dir.join("x.csv");
    let r = run(&[
        "ou", "--a", "0.5", "--sigma", "1", "--t-max", "2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("no stationary density"), "{}", r.stderr);
}

#[test]
fn unstable_entropy_exits_1_with_a_hayes_report() {
    let dir = tmp("unstable");
    let out = dir.join("x.csv");
    let r = run(&[
        "entropy", "--a", "2", "--b", "0", "--tau", "1", "--sigma", "1", "--brownian", "1",
        "--t-max", "2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("classification: Unstable"), "{}", r.stderr);
    assert!(r.stderr.contains("margin 1"), "{}", r.stderr);
    assert!(!out.exists());
}

#[test]
fn bad_thread_env_exits_2() {
    let out = bin()
        .args(["verify", "--suite", "identities"])
        .env("ENTROFLOW_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 2);
}

#[test]
fn dde_reproduces_the_damped_solution() {
    let dir = tmp("dde-rows");
    let out = dir.join("damped.csv");
    let r = run(&[
        "dde", "--a", "0", "--b", "-1", "--tau", "1.1", "--phi-const", "1", "--t-max", "2.2",
        "--points", "5", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (header, cols) = read_csv(&out);
    assert_eq!(header, ["t", "x"]);
    assert_eq!(cols[0].len(), 5);
    assert_eq!(cols[0][0], 0.0);
    assert!((cols[1][0] - 1.0).abs() < 1e-12);
    assert_eq!(cols[0][2], 1.1);
    assert!((cols[1][2] - -0.1).abs() < 1e-12);
    assert_eq!(cols[0][4], 2.2);
    // Closed form by integrating twice: x(2.2) = -0.595. Double-checked
    // against the method-of-steps integrator.
    let steps = entroflow_steps::solve(0.0, -1.0, 1.1, 1.0, |_| 1.0, 2, 2000);
    assert!((steps.eval(2.2) - -0.595).abs() < 1e-10);
    assert!((cols[1][4] - -0.595).abs() < 1e-8);
}

#[test]
fn ou_stationary_start_prints_literal_zero_conditional_entropy() {
    let dir = tmp("ou-stationary");
    let out = dir.join("flat.csv");
    let r = run(&[
        "ou", "--a", "-0.5", "--sigma", "1", "--init-var", "1", "--t-max", "3", "--points", "6",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    let (header, cols) = read_csv(&out);
    assert_eq!(header, ["t", "mean", "variance", "H_G", "H_c"]);
    assert_eq!(cols[0].len(), 6);
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",0.0"), "H_c not a literal zero: {line}");
    }
}

#[test]
fn ou_below_stationary_start_has_strictly_increasing_gibbs_entropy() {
    let dir = tmp("ou-growth");
    let out = dir.join("grow.csv");
    let r = run(&[
        "ou", "--a", "-1", "--sigma", "1.4142135623730951", "--init-var", "0.5", "--t-max", "5",
        "--points", "500", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, cols) = read_csv(&out);
    let h_g = &cols[3];
    assert!(h_g.windows(2).all(|w| w[1] > w[0]), "H_G not strictly increasing");
}

#[test]
fn entropy_without_delayed_feedback_matches_cmd_ou_byte_for_byte() {
    let dir = tmp("reduction");
    let ou_out = dir.join("ou.csv");
    let ent_out = dir.join("ent.csv");
    let r = run(&[
        "ou", "--a", "-0.5", "--sigma", "1.1", "--init-mean", "0.7", "--init-var", "0",
        "--t-max", "4", "--points", "64", "--out", ou_out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(&[
        "entropy", "--a", "-0.5", "--b", "0", "--tau", "1", "--sigma", "1.1", "--phi-const",
        "0.7", "--t-max", "4", "--points", "64", "--out", ent_out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    // Same rows once the mean column is dropped from the OU table.
    let ou_text = std::fs::read_to_string(&ou_out).unwrap();
    let ent_text = std::fs::read_to_string(&ent_out).unwrap();
    let stripped: Vec<String> = ou_text
        .lines()
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            [fields[0], fields[2], fields[3], fields[4]].join(",")
        })
        .collect();
    let expected: Vec<&str> = ent_text.lines().collect();
    assert_eq!(stripped.len(), expected.len());
    for (ou_line, ent_line) in stripped
        .iter()
        .zip(expected.iter())
        .skip(1)
    {
        assert_eq!(ou_line, ent_line);
    }
}

#[test]
fn manifest_echo_reproduces_the_run_byte_for_byte() {
    let dir = tmp("manifest-rerun");
    let out = dir.join("curve.csv");
    let r = run(&[
        "entropy", "--a", "0", "--b", "-1", "--tau", "pi/2", "--sigma", "0", "--brownian", "1",
        "--t-max", "12", "--points", "48", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("curve.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["tool"], "entroflow");
    assert_eq!(manifest["subcommand"], "entropy");
    assert_eq!(manifest["k0"], serde_json::Value::Null);
    assert_eq!(manifest["h_conditional_non_monotone"], true);

    // Re-run from the echoed parameters; the echo resolves pi/2 to its
    // shortest round-trip decimal, which parses back to the same f64.
    let p = &manifest["parameters"];
    let out2 = dir.join("curve2.csv");
    let r = run(&[
        "entropy",
        "--a", p["a"].as_str().unwrap(),
        "--b", p["b"].as_str().unwrap(),
        "--tau", p["tau"].as_str().unwrap(),
        "--sigma", p["sigma"].as_str().unwrap(),
        "--brownian", p["brownian"].as_str().unwrap(),
        "--t-max", p["t-max"].as_str().unwrap(),
        "--points", p["points"].as_str().unwrap(),
        "--out", out2.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        std::fs::read_to_string(&out2).unwrap()
    );
}

#[test]
fn entropy_manifest_records_k0_and_non_monotonicity() {
    let dir = tmp("manifest-flags");
    let out = dir.join("curve.csv");
    let r = run(&[
        "entropy", "--a", "0", "--b", "-1", "--tau", "1", "--sigma", "0.25", "--brownian", "1",
        "--t-max", "6", "--points", "120", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("curve.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert!((manifest["k0"].as_f64().unwrap() - 0.10650698257299461).abs() < 1e-12);
    assert_eq!(manifest["h_gibbs_non_monotone"], true);
    assert_eq!(manifest["h_conditional_non_monotone"], true);

    // A plain stable relaxation is monotone in both columns.
    let out2 = dir.join("plain.csv");
    let r = run(&[
        "entropy", "--a", "-1", "--b", "-0.3", "--tau", "0.5", "--sigma", "1", "--phi-const",
        "1", "--t-max", "6", "--points", "120", "--out", out2.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("plain.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["h_gibbs_non_monotone"], false);
}

#[test]
fn config_file_supplies_flags_and_flags_win() {
    let dir = tmp("config");
    let cfg = dir.join("run.cfg");
    let out = dir.join("from-config.csv");
    std::fs::write(
        &cfg,
        format!(
            "# delayed relaxation\na = 0\nb = -1\ntau = 1.1\nphi-const = 1\nt-max = 2.2\npoints = 5\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let r = run(&["dde", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, cols) = read_csv(&out);
    assert!((cols[1][4] - -0.595).abs() < 1e-8);

    // A flag overrides the same key from the file.
    let out2 = dir.join("override.csv");
    let r = run(&[
        "dde", "--config", cfg.to_str().unwrap(), "--t-max", "1.1", "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, cols) = read_csv(&out2);
    assert_eq!(*cols[0].last().unwrap(), 1.1);

    // Unknown config keys are usage errors.
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "volume=11\n").unwrap();
    let r = run(&["dde", "--config", bad.to_str().unwrap()]);
    assert_eq!(r.code, 2);
}

#[test]
fn pi_literal_delay_lands_exactly_on_the_marginal_point() {
    let r = run(&["stability", "--a", "0", "--b", "-1", "--tau", "pi/2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("classification: Marginal"), "{}", r.stdout);
    assert!(r.stdout.contains("margin 3 (b*tau + a*tau*cos(kappa) + kappa*sin(kappa)): 0.0"));

    // The same delay typed as a decimal misses the point by ~3e-8, which
    // is genuinely inside the stable wedge.
    let r = run(&["stability", "--a", "0", "--b", "-1", "--tau", "1.5707963"]);
    assert!(r.stdout.contains("classification: Stable"), "{}", r.stdout);

    let r = run(&["stability", "--a", "0", "--b", "-1", "--tau", "1"]);
    assert!(r.stdout.contains("classification: Stable"));
    let r = run(&["stability", "--a", "2", "--b", "0", "--tau", "1"]);
    assert!(r.stdout.contains("classification: Unstable"));
}

#[test]
fn tabulated_history_file_drives_the_solution() {
    let dir = tmp("phi-file");
    let hist = dir.join("history.csv");
    // A linear ramp from 0 at s = -1 to 1 at s = 0.
    std::fs::write(&hist, "-1.0,0.0\n0.0,1.0\n").unwrap();
    let out = dir.join("ramp.csv");
    let r = run(&[
        "dde", "--a", "0", "--b", "-1", "--tau", "1", "--phi-file", hist.to_str().unwrap(),
        "--t-max", "1", "--points", "11", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, cols) = read_csv(&out);
    // x'(t) = -phi(t - 1) = -(t) on [0,1], so x(t) = 1 - t^2/2.
    for (i, &t) in cols[0].iter().enumerate() {
        let want = 1.0 - 0.5 * t * t;
        assert!((cols[1][i] - want).abs() < 1e-10, "t = {t}");
    }

    // A file that does not cover [-tau, 0] is a domain error.
    std::fs::write(&hist, "-0.5,0.0\n0.0,1.0\n").unwrap();
    let r = run(&[
        "dde", "--a", "0", "--b", "-1", "--tau", "1", "--phi-file", hist.to_str().unwrap(),
        "--t-max", "1", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
}

#[test]
fn verify_report_can_be_written_to_a_file_with_a_manifest() {
    let dir = tmp("verify-out");
    let out = dir.join("report.txt");
    let r = run(&[
        "verify", "--suite", "fpe-residual", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = std::fs::read_to_string(&out).unwrap();
    assert_eq!(report, r.stdout);
    assert!(report.contains("result: 13/13 checks passed"));
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("report.txt.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["subcommand"], "verify");
    assert_eq!(manifest["master_seed"], serde_json::Value::Null);
}

#[test]
fn row_counts_match_the_points_flag() {
    let dir = tmp("rows");
    for (cmd, expected_first) in [("ou", 0.05_f64), ("entropy", 0.05)] {
        let out = dir.join(format!("{cmd}.csv"));
        let mut args = vec![
            "--a", "-1", "--sigma", "1", "--t-max", "2", "--points", "40", "--out",
        ];
        let full: Vec<&str> = match cmd {
            "ou" => {
                let mut v = vec!["ou"];
                v.extend(&args);
                v.push(out.to_str().unwrap());
                v
            }
            _ => {
                args = vec![
                    "--a", "-1", "--b", "-0.2", "--tau", "0.5", "--sigma", "1", "--phi-const",
                    "1", "--t-max", "2", "--points", "40", "--out",
                ];
                let mut v = vec!["entropy"];
                v.extend(&args);
                v.push(out.to_str().unwrap());
                v
            }
        };
        let r = run(&full);
        assert_eq!(r.code, 0, "{cmd}: {}", r.stderr);
        let (_, cols) = read_csv(&out);
        assert_eq!(cols[0].len(), 40, "{cmd}");
        assert!((cols[0][0] - expected_first).abs() < 1e-15, "{cmd}");
        assert_eq!(*cols[0].last().unwrap(), 2.0, "{cmd}");
    }
}
