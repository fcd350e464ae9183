use std::fs;
use std::io::Write;
use std::path::PathBuf;

use stigma_core::montecarlo::{analytic_targets, simulate};
use stigma_core::signaling::{check_assumptions, pointwise_continuation, stigma_level};
use stigma_core::welfare::{
    decomposition, evaluate, optimize_with_grid, present_bias_loss, sweep_evaluations, unit_grid, SweepRow,
};
use stigma_core::{Convention, ModelParams, Risk, SimConfig};

use crate::config::load_config;
use crate::error::CliError;
use crate::svg::{line_chart, Series};
use crate::table::{fmt_num, Cell, Table};
use crate::{Command, Options};

/// Fully resolved inputs for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub convention: Convention,
    pub m_defaulted: bool,
    pub grid: usize,
    pub tol: f64,
    pub pairs: u64,
    pub seed: u64,
    pub strict: bool,
    pub out_dir: PathBuf,
    pub svg: bool,
}

impl RunConfig {
    /// Loads the config file and applies command-line overrides.
    pub fn from_options(opts: &Options) -> Result<Self, CliError> {
        let path = opts.config.as_deref().ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
        let file = load_config(path)?;
        let mut params = file.params;
        if let Some(tau) = opts.tau {
            params.perceived_risk = tau;
            params.validate().map_err(|e| CliError::Config(format!("--tau: {e}")))?;
        }
        if opts.grid < 2 {
            return Err(CliError::Config(format!("--grid must be at least 2, got {}", opts.grid)));
        }
        if !(opts.tol.is_finite() && opts.tol > 0.0) {
            return Err(CliError::Config(format!("--tol must be positive, got {}", opts.tol)));
        }
        if opts.pairs == 0 {
            return Err(CliError::Config("--pairs must be positive".into()));
        }
        Ok(RunConfig {
            params,
            convention: opts.convention.map(Into::into).unwrap_or(file.convention),
            m_defaulted: file.m_defaulted,
            grid: opts.grid,
            tol: opts.tol,
            pairs: opts.pairs,
            seed: opts.seed,
            strict: opts.strict,
            out_dir: opts.out.clone(),
            svg: opts.svg,
        })
    }

    /// One-line parameter echo printed before every command's output.
    pub fn header(&self) -> String {
        let p = &self.params;
        let m = if self.m_defaulted {
            format!("{} (default)", fmt_num(p.coordination_payoff))
        } else {
            fmt_num(p.coordination_payoff)
        };
        format!(
            "# theta_L={} theta_H={} v={} c={} c_h={} z={} u={} M={m} tau_hat={} tau_true={} dist_beta={} dist_y={} convention={}",
            fmt_num(p.theta_low),
            fmt_num(p.theta_high),
            fmt_num(p.treatment_benefit),
            fmt_num(p.test_cost),
            fmt_num(p.infection_cost),
            fmt_num(p.partner_health_cost),
            fmt_num(p.safe_sex_cost),
            fmt_num(p.perceived_risk),
            fmt_num(p.true_risk),
            p.present_bias,
            p.valuation,
            self.convention.as_str(),
        )
    }

    fn output_path(&self, name: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.out_dir)
            .map_err(|e| CliError::Output(format!("cannot create {}: {e}", self.out_dir.display())))?;
        Ok(self.out_dir.join(name))
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.output_path(name)?;
        fs::write(&path, contents).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

pub fn run(command: Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "{}", cfg.header())?;
    let report = check_assumptions(&cfg.params);
    if command == Command::Check {
        print_check(cfg, out)?;
    }
    if cfg.strict && !report.utility_gap {
        return Err(CliError::Assumption(format!(
            "c_h = {} does not exceed {} (strict mode)",
            fmt_num(cfg.params.infection_cost),
            fmt_num(report.infection_cost_bound)
        )));
    }
    match command {
        Command::Check => Ok(()),
        Command::Evaluate => run_evaluate(cfg, out),
        Command::Sweep => run_sweep(cfg, out),
        Command::Optimize => run_optimize(cfg, out),
        Command::Simulate => run_simulate(cfg, out),
        Command::Figures => run_figures(cfg, out),
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "violated"
    }
}

fn print_check(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let p = &cfg.params;
    let r = check_assumptions(p);
    let (below, above) = r.testing_margins;
    writeln!(
        out,
        "testing participation: {}: c - theta_L v = {} > 0, theta_H v - c = {} > 0",
        status(r.participation_of_testing),
        fmt_num(below),
        fmt_num(above)
    )?;
    writeln!(
        out,
        "interaction consent: {}: refusing mass of B players = {} at infected share {} (reported only)",
        status(r.interaction_participation()),
        fmt_num(r.interaction_violating_mass),
        fmt_num(r.infected_share)
    )?;
    writeln!(
        out,
        "utility gap: {}: c_h = {} > (theta_H v - c)/(theta_H - theta_L) = {}/{} = {}",
        status(r.utility_gap),
        fmt_num(p.infection_cost),
        fmt_num(p.testing_gain(p.theta_high)),
        fmt_num(p.theta_high - p.theta_low),
        fmt_num(r.infection_cost_bound)
    )?;
    Ok(())
}

fn sweep_header() -> String {
    SweepRow::HEADER.join(",")
}

fn sweep_line(row: &SweepRow) -> String {
    row.values().iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",")
}

/// `sweep.csv` contents for the configured grid.
pub fn sweep_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let evals = sweep_evaluations(&cfg.params, &unit_grid(cfg.grid), cfg.convention)?;
    let mut csv = sweep_header();
    csv.push('\n');
    for e in &evals {
        csv.push_str(&sweep_line(&e.row()));
        csv.push('\n');
    }
    Ok(csv)
}

fn run_evaluate(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let e = evaluate(&cfg.params, cfg.params.perceived_risk, cfg.convention)?;
    let p1 = &e.equilibrium.period1;
    writeln!(
        out,
        "# regime={} beta_star={} y_star={} EV_L={} EV_H={}",
        p1.regime.as_str(),
        fmt_num(p1.hot_threshold),
        fmt_num(e.equilibrium.period2.testing_threshold),
        fmt_num(e.equilibrium.period2.ev_low),
        fmt_num(e.equilibrium.period2.ev_high)
    )?;
    writeln!(out, "{}", sweep_header())?;
    writeln!(out, "{}", sweep_line(&e.row()))?;
    Ok(())
}

fn run_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let path = cfg.write("sweep.csv", &sweep_csv(cfg)?)?;
    writeln!(out, "wrote {} ({} rows)", path.display(), cfg.grid)?;
    Ok(())
}

fn run_optimize(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let opt = optimize_with_grid(&cfg.params, cfg.convention, cfg.tol, cfg.grid)?;
    let mut trace = Table::new(["step", "phase", "tau_hat", "objective"]);
    trace.comments.push(format!("convention={} objective=W-M", cfg.convention.as_str()));
    for (i, t) in opt.trace.iter().enumerate() {
        trace.push(vec![
            Cell::Int(i as u64),
            Cell::Text(t.phase.as_str().into()),
            Cell::Num(t.tau_hat),
            Cell::Num(t.objective),
        ]);
    }
    let path = cfg.write("optimize_trace.csv", &trace.to_csv())?;
    writeln!(out, "tau_star={}", fmt_num(opt.tau_star))?;
    writeln!(out, "W_star={}", fmt_num(opt.welfare_star))?;

    let loss = present_bias_loss(&cfg.params)?;
    writeln!(out, "present_bias_loss r(0)*gap(0)={}", fmt_num(loss.period2_loss))?;
    writeln!(out, "benchmark_gap r(0)*(gap(0)-u)={}", fmt_num(loss.benchmark_gap))?;
    let d = decomposition(&cfg.params, opt.tau_star)?;
    writeln!(
        out,
        "decomposition at tau_star: deterrence={} suppression={} b_loss={} sum={} exact={} residual={}",
        fmt_num(d.deterrence_gain),
        fmt_num(d.suppression_loss),
        fmt_num(d.b_loss),
        fmt_num(d.channel_sum),
        fmt_num(d.exact_delta),
        fmt_num(d.residual)
    )?;
    writeln!(out, "wrote {} ({} evaluations)", path.display(), opt.trace.len())?;
    Ok(())
}

const SIM_COLUMNS: [&str; 22] = [
    "tau_hat",
    "n_pairs",
    "seed",
    "r_hat",
    "r_se",
    "r",
    "R_hat",
    "R_se",
    "R",
    "R_H_hat",
    "R_H_se",
    "R_H",
    "S_hat",
    "S_se",
    "S",
    "W_hat",
    "W_se",
    "W",
    "hot_hot",
    "cold_cold",
    "hot_cold_unsafe",
    "hot_cold_safe",
];

/// `sim.csv` contents: estimates, standard errors and analytic targets.
pub fn sim_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let tau = cfg.params.perceived_risk;
    let sim = simulate(
        &cfg.params,
        &SimConfig { n_pairs: cfg.pairs, seed: cfg.seed, tau_hat: tau, convention: cfg.convention },
    )?;
    let t = analytic_targets(&cfg.params, tau, cfg.convention)?;
    let mut table = Table::new(SIM_COLUMNS);
    table.comments.push(format!("convention={}", cfg.convention.as_str()));
    let mut row = vec![Cell::Num(tau), Cell::Int(sim.n_pairs), Cell::Int(cfg.seed)];
    for (est, target) in [
        (sim.high_risk_share, t.high_risk_share),
        (sim.testing_rate, t.testing_rate),
        (sim.testing_rate_high, t.testing_rate_high),
        (sim.stigma, t.stigma),
        (sim.welfare, t.welfare),
    ] {
        row.extend([Cell::Num(est.mean), Cell::Num(est.std_error), Cell::Num(target)]);
    }
    let c = sim.counts;
    row.extend([c.hot_hot, c.cold_cold, c.hot_cold_unsafe, c.hot_cold_safe].map(Cell::Int));
    table.push(row);
    Ok(table)
}

fn run_simulate(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let table = sim_table(cfg)?;
    let path = cfg.write("sim.csv", &table.to_csv())?;
    let row = &table.rows[0];
    for (name, i) in [("r", 3), ("R", 6), ("R_H", 9), ("S", 12), ("W", 15)] {
        let (est, se, target) = (row[i].as_f64(), row[i + 1].as_f64(), row[i + 2].as_f64());
        let z = if est == target { 0.0 } else { (est - target).abs() / se };
        writeln!(
            out,
            "{name}: simulated {} (se {}) analytic {} z={:.2}",
            fmt_num(est),
            fmt_num(se),
            fmt_num(target),
            z
        )?;
    }
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

const FIG_STIGMA_LEVELS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const FIG_VALUATION_POINTS: usize = 201;
const FIG_BOUNDARY_POINTS: usize = 51;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn valuation_grid(params: &ModelParams) -> Vec<f64> {
    linspace(params.valuation.support_lo(), params.valuation.support_hi(), FIG_VALUATION_POINTS)
}

/// Continuation values against the valuation at the configured stigma.
pub fn figure1(params: &ModelParams) -> Table {
    let s = stigma_level(params);
    let mut t = Table::new(["y", "V_L", "V_H"]);
    t.comments.push(format!("S={}", fmt_num(s)));
    for y in valuation_grid(params) {
        t.push_nums([
            y,
            pointwise_continuation(params, s, y, Risk::Low),
            pointwise_continuation(params, s, y, Risk::High),
        ]);
    }
    t
}

/// High-risk continuation values for several stigma levels.
pub fn figure2(params: &ModelParams) -> Table {
    let mut cols = vec!["y".to_string(), "V_L".to_string()];
    cols.extend(FIG_STIGMA_LEVELS.iter().map(|s| format!("V_H_S{}", fmt_num(*s))));
    let mut t = Table::new(cols);
    for y in valuation_grid(params) {
        let mut row = vec![y, pointwise_continuation(params, 0.0, y, Risk::Low)];
        row.extend(FIG_STIGMA_LEVELS.iter().map(|&s| pointwise_continuation(params, s, y, Risk::High)));
        t.push_nums(row);
    }
    t
}

/// Boundary `beta_1 + beta_2 = 2 beta*` of the unsafe region for no stigma,
/// the configured perceived risk and full stigma.
pub fn figure3(params: &ModelParams) -> Result<Table, CliError> {
    let (lo, hi) = (params.present_bias.support_lo(), params.present_bias.support_hi());
    let mut t = Table::new(["tau_hat", "beta_star", "beta_1", "beta_2"]);
    t.comments.push("pairs with beta_1 + beta_2 < 2 beta_star coordinate on unsafe sex".into());
    let mut taus = vec![0.0, params.perceived_risk, 1.0];
    taus.dedup();
    for tau in taus {
        let eq = evaluate(params, tau, Convention::Corrected)?.equilibrium;
        let b = eq.period1.hot_threshold;
        let start = (2.0 * b - hi).max(lo);
        let end = (2.0 * b - lo).min(hi);
        if start >= end {
            t.comments.push(format!("tau_hat={}: whole support unsafe (beta_star={})", fmt_num(tau), fmt_num(b)));
            continue;
        }
        for b1 in linspace(start, end, FIG_BOUNDARY_POINTS) {
            t.push_nums([tau, b, b1, 2.0 * b - b1]);
        }
    }
    Ok(t)
}

/// Equilibrium quantities across the perceived-risk grid.
pub fn figure4(cfg: &RunConfig) -> Result<Table, CliError> {
    let evals = sweep_evaluations(&cfg.params, &unit_grid(cfg.grid), cfg.convention)?;
    let mut t = Table::new(["tau_hat", "S", "gap", "EV_L", "EV_H", "H", "r", "R_H", "R"]);
    for e in &evals {
        let (p1, p2) = (&e.equilibrium.period1, &e.equilibrium.period2);
        t.push_nums([
            e.equilibrium.perceived_risk,
            p2.stigma,
            p2.gap,
            p2.ev_low,
            p2.ev_high,
            p1.hot_share,
            p1.high_risk_share,
            p2.testing_rate_high,
            p2.testing_rate,
        ]);
    }
    Ok(t)
}

/// Group and total welfare across the grid, raw and demeaned by the grid mean.
pub fn figure5(cfg: &RunConfig) -> Result<Table, CliError> {
    let evals = sweep_evaluations(&cfg.params, &unit_grid(cfg.grid), cfg.convention)?;
    let raw: Vec<[f64; 4]> = evals
        .iter()
        .map(|e| {
            let w = &e.welfare;
            [w.components.high_risk, w.components.low_risk, w.welfare_b, w.total]
        })
        .collect();
    let n = raw.len() as f64;
    let means: Vec<f64> = (0..4).map(|k| raw.iter().map(|r| r[k]).sum::<f64>() / n).collect();

    let mut t = Table::new([
        "tau_hat",
        "W_high",
        "W_low",
        "W_B",
        "W",
        "W_high_demeaned",
        "W_low_demeaned",
        "W_B_demeaned",
        "W_demeaned",
    ]);
    t.comments.push(format!(
        "convention={} M={} demeaned columns subtract the grid mean",
        cfg.convention.as_str(),
        fmt_num(cfg.params.coordination_payoff)
    ));
    for (e, r) in evals.iter().zip(&raw) {
        let mut row = vec![e.equilibrium.perceived_risk];
        row.extend(r);
        row.extend((0..4).map(|k| r[k] - means[k]));
        t.push_nums(row);
    }
    Ok(t)
}

fn series_from(table: &Table, x: &str, ys: &[&str]) -> Vec<Series> {
    let xs = table.column(x).unwrap_or_default();
    ys.iter().filter_map(|&y| table.column(y).map(|v| Series::new(y, &xs, &v))).collect()
}

/// Renders a figure CSV as an SVG chart. Depends only on the CSV text.
pub fn figure_svg(name: &str, csv: &str) -> Result<String, CliError> {
    let t = Table::parse_csv(csv).map_err(|e| CliError::Numerical(format!("{name}: {e}")))?;
    let chart = match name {
        "fig1" => line_chart("Continuation value by valuation", "y", "value", &series_from(&t, "y", &["V_L", "V_H"])),
        "fig2" => {
            let ys: Vec<&str> = t.columns[1..].iter().map(String::as_str).collect();
            line_chart("High-risk continuation value by stigma", "y", "value", &series_from(&t, "y", &ys))
        }
        "fig3" => {
            let taus = t.column("tau_hat").unwrap_or_default();
            let (b1, b2) = (t.column("beta_1").unwrap_or_default(), t.column("beta_2").unwrap_or_default());
            let mut series: Vec<Series> = Vec::new();
            for i in 0..taus.len() {
                if series.last().map(|s| s.name != format!("tau_hat={}", fmt_num(taus[i]))).unwrap_or(true) {
                    series.push(Series { name: format!("tau_hat={}", fmt_num(taus[i])), points: Vec::new() });
                }
                series.last_mut().expect("pushed above").points.push((b1[i], b2[i]));
            }
            line_chart("Unsafe-region boundary", "beta_1", "beta_2", &series)
        }
        "fig4" => line_chart(
            "Equilibrium quantities by perceived risk",
            "tau_hat",
            "value",
            &series_from(&t, "tau_hat", &["S", "gap", "H", "r", "R_H", "R"]),
        ),
        "fig5" => line_chart(
            "Demeaned welfare by perceived risk",
            "tau_hat",
            "welfare - grid mean",
            &series_from(&t, "tau_hat", &["W_high_demeaned", "W_low_demeaned", "W_B_demeaned", "W_demeaned"]),
        ),
        other => return Err(CliError::Numerical(format!("no chart layout for {other}"))),
    };
    Ok(chart)
}

fn run_figures(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let tables = [
        ("fig1", figure1(&cfg.params)),
        ("fig2", figure2(&cfg.params)),
        ("fig3", figure3(&cfg.params)?),
        ("fig4", figure4(cfg)?),
        ("fig5", figure5(cfg)?),
    ];
    for (name, table) in &tables {
        let csv = table.to_csv();
        let path = cfg.write(&format!("{name}.csv"), &csv)?;
        writeln!(out, "wrote {}", path.display())?;
        if cfg.svg {
            let path = cfg.write(&format!("{name}.svg"), &figure_svg(name, &csv)?)?;
            writeln!(out, "wrote {}", path.display())?;
        }
    }
    Ok(())
}
