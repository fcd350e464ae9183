use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const EXAMPLE_CFG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/paper.cfg");

fn stigma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stigma")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn example_text() -> String {
    fs::read_to_string(EXAMPLE_CFG).unwrap()
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

/// (fixture, config text, command, extra flag, expected code, text expected on stderr)
type Fixture<'a> = (&'a str, String, &'a str, Option<&'a str>, i32, &'a str);

#[test]
fn malformed_configs_exit_with_documented_codes() {
    let dir = tempfile::tempdir().unwrap();
    let base = example_text();
    let fixtures: Vec<Fixture> = vec![
        ("missing_key", base.replace("z = 2.5\n", ""), "check", None, 2, "`z`"),
        ("bad_number", base.replace("u = 0.1", "u = ten"), "check", None, 2, "`u`"),
        ("unknown_key", format!("{base}gamma = 1\n"), "check", None, 2, "`gamma`"),
        ("a1_violation", base.replace("c = 0.55", "c = 0.1"), "check", None, 2, "`c`"),
        ("bad_distribution", base.replace("uniform(0,2)", "uniform(2,0)"), "check", None, 2, "dist_y"),
        ("bad_convention", format!("{base}convention = both\n"), "check", None, 2, "both"),
        ("a3_strict", base.replace("c_h = 1", "c_h = 0.3"), "check", Some("--strict"), 3, "strict"),
        ("a3_strict_evaluate", base.replace("c_h = 1", "c_h = 0.3"), "evaluate", Some("--strict"), 3, "strict"),
        ("true_risk", format!("{base}tau_true = 0.2\n"), "evaluate", None, 2, "true transmission risk"),
        ("tau_out_of_range", base.replace("tau_hat = 0.5", "tau_hat = 1.5"), "check", None, 2, "tau_hat"),
    ];
    for (name, text, command, flag, code, needle) in fixtures {
        let path = write_cfg(dir.path(), &format!("{name}.cfg"), &text);
        let mut args = vec![command, "--config", path.to_str().unwrap()];
        args.extend(flag);
        let o = stigma(&args);
        assert_eq!(o.status.code(), Some(code), "{name}: {}", stderr(&o));
        assert!(stderr(&o).contains(needle), "{name}: stderr `{}` lacks `{needle}`", stderr(&o));
    }
}

#[test]
fn option_errors_exit_two() {
    for args in [
        vec!["check"],
        vec!["check", "--config", "/nonexistent/paper.cfg"],
        vec!["sweep", "--config", EXAMPLE_CFG, "--grid", "1"],
        vec!["optimize", "--config", EXAMPLE_CFG, "--tol", "0"],
        vec!["simulate", "--config", EXAMPLE_CFG, "--pairs", "0"],
        vec!["evaluate", "--config", EXAMPLE_CFG, "--tau", "-0.1"],
        vec!["evaluate", "--config", EXAMPLE_CFG, "--convention", "other"],
        vec!["frobnicate", "--config", EXAMPLE_CFG],
    ] {
        let o = stigma(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn utility_gap_violation_is_reported_without_strict() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cfg(dir.path(), "weak.cfg", &example_text().replace("c_h = 1", "c_h = 0.3"));
    let o = stigma(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("utility gap: violated"));
}

#[test]
fn header_echoes_default_and_explicit_coordination_payoff() {
    let o = stigma(&["check", "--config", EXAMPLE_CFG]);
    assert!(o.status.success());
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(first.contains("M=1 (default)"), "{first}");

    let dir = tempfile::tempdir().unwrap();
    let path = write_cfg(dir.path(), "m.cfg", &format!("{}M = 2\n", example_text()));
    let o = stigma(&["check", "--config", path.to_str().unwrap()]);
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(first.contains("M=2 ") && !first.contains("(default)"), "{first}");
}

#[test]
fn evaluate_reproduces_every_sweep_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(stigma(&["sweep", "--config", EXAMPLE_CFG, "--out", out]).status.success());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("tau_hat,S,gap,H,r,R_H,R,W_A,W_B,W"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 101);
    for (i, row) in rows.iter().enumerate() {
        let tau = format!("{}", i as f64 / 100.0);
        let o = stigma(&["evaluate", "--config", EXAMPLE_CFG, "--tau", &tau]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert_eq!(text.lines().last(), Some(*row), "tau_hat = {tau}");
    }
}

#[test]
fn optimize_prints_optimum_and_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = stigma(&["optimize", "--config", EXAMPLE_CFG, "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let tau_star: f64 =
        text.lines().find_map(|l| l.strip_prefix("tau_star=")).and_then(|v| v.parse().ok()).expect("tau_star line");
    assert!((0.25..=0.5).contains(&tau_star), "{tau_star}");
    assert!(text.lines().any(|l| l.starts_with("W_star=")));
    let trace = fs::read_to_string(dir.path().join("optimize_trace.csv")).unwrap();
    assert!(trace.contains("step,phase,tau_hat,objective"));
    assert_eq!(trace.lines().filter(|l| l.contains(",grid,")).count(), 101);
    assert!(trace.lines().any(|l| l.contains(",golden,")));
}

#[test]
fn simulate_writes_targets_next_to_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let o = stigma(&[
        "simulate",
        "--config",
        EXAMPLE_CFG,
        "--pairs",
        "20000",
        "--seed",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sim.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# convention=corrected");
    let header: Vec<&str> = lines[1].split(',').collect();
    let row: Vec<&str> = lines[2].split(',').collect();
    let get = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(get("n_pairs"), "20000");
    assert_eq!(get("seed"), "3");
    assert_eq!(get("r"), "0.0618282816085");
    assert_eq!(get("R_H"), "0.25");
    let counts: u64 = ["hot_hot", "cold_cold", "hot_cold_unsafe", "hot_cold_safe"]
        .iter()
        .map(|c| get(c).parse::<u64>().unwrap())
        .sum();
    assert_eq!(counts, 20000);
}

#[test]
fn figures_write_csvs_and_deterministic_svgs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = stigma(&["figures", "--config", EXAMPLE_CFG, "--svg", "--out", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for n in 1..=5 {
        for ext in ["csv", "svg"] {
            let name = format!("fig{n}.{ext}");
            let x = fs::read(a.path().join(&name)).unwrap();
            assert!(!x.is_empty(), "{name}");
            assert_eq!(x, fs::read(b.path().join(&name)).unwrap(), "{name}");
        }
    }

    let fig5 = fs::read_to_string(a.path().join("fig5.csv")).unwrap();
    assert!(fig5.starts_with("# convention=corrected"));
    let header: Vec<&str> = fig5.lines().nth(1).unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "W_demeaned").unwrap();
    let values: Vec<f64> = fig5.lines().skip(2).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect();
    assert!(values.last().unwrap() > values.first().unwrap());
    assert!(values.iter().sum::<f64>().abs() < 1e-9);

    let fig1 = fs::read_to_string(a.path().join("fig1.csv")).unwrap();
    assert!(fig1.starts_with("# S=0.5\ny,V_L,V_H\n0,"));
    // zero valuation at S = 0.5: high-risk value is -theta_H c_h + theta_H v - c
    let first: Vec<f64> = fig1.lines().nth(2).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((first[2] + 0.55).abs() < 1e-12);
}

#[test]
fn figures_stamp_the_literal_convention() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        stigma(&["figures", "--config", EXAMPLE_CFG, "--convention", "paper", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let fig5 = fs::read_to_string(dir.path().join("fig5.csv")).unwrap();
    assert!(fig5.starts_with("# convention=paper"), "{fig5}");
}

#[test]
fn piecewise_distributions_load_from_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("beta.csv"), "x,p\n0,0\n0.2,0.35\n0.6,0.55\n1,1\n").unwrap();
    let text = example_text().replace("dist_beta = uniform(0,1)", "dist_beta = piecewise:beta.csv");
    let path = write_cfg(dir.path(), "pw.cfg", &text);
    let o = stigma(&["evaluate", "--config", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("dist_beta=piecewise("));
}
