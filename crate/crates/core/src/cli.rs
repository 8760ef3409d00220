//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 I/O error, 4 statistical
//! self-check failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analytics::{
    justice_error, nested_prob_noisy, sweep_alice, table1, Party, SweepResult, TABLE1_HEADER,
};
use crate::config::ScenarioConfig;
use crate::elements::{Bbbg09Coefficient, ElementProfile};
use crate::engine::{estimate, FrameworkSpec, Scenario, TrialStats};
use crate::fairness::{fair_chailloux, solve_fair_bbbg09, DEFAULT_TOLERANCE};
use crate::format::{fmt_num, json_num};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_SELF_CHECK: i32 = 4;

/// A simulation whose estimate is further than this many standard errors
/// from the closed form fails the self-check.
pub const SELF_CHECK_SIGMAS: f64 = 5.0;

#[derive(Debug, Parser)]
#[command(name = "nested-qcf", version, about = "Nested quantum coin flipping under channel noise")]
pub struct Cli {
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the scenario trial count.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Panel {
    /// Curves for several depths.
    A,
    /// Curves for several element cheat probabilities at fixed depth.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FairElement {
    Bbbg09,
    Chailloux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefficientArg {
    Half,
    Quarter,
}

impl From<CoefficientArg> for Bbbg09Coefficient {
    fn from(c: CoefficientArg) -> Self {
        match c {
            CoefficientArg::Half => Bbbg09Coefficient::Half,
            CoefficientArg::Quarter => Bbbg09Coefficient::Quarter,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cheat probability and bias for 2 to 6 perfect elements (CSV).
    Table1,
    /// Cheating Alice's success probability against the QBER (CSV).
    Sweep {
        /// Scenario file; its first element is the base profile. Defaults to
        /// p = 0.8, p* = 0.5.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "a")]
        panel: Panel,
    },
    /// Monte Carlo estimate of a scenario next to its closed form (JSON).
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// honest_failure, cheat_alice, cheat_bob or honest_coin0.
        scenario: String,
    },
    /// Fair two-level composition with a perfect second element (JSON).
    SolveFair {
        #[arg(value_enum)]
        element: FairElement,
        /// BBBG09 only; defaults to `half`.
        #[arg(long, value_enum)]
        coefficient: Option<CoefficientArg>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
}

/// A failed command: exit code, diagnostic, and any result that should
/// still be written.
#[derive(Debug)]
struct Failure(i32, String, Option<String>);

type CmdResult = std::result::Result<String, Failure>;

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INPUT, e.to_string(), None)
}

/// Parses `args` (including the program name) and runs the command.
/// Results go to `--output` or `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (text, failure) = match execute(&cli) {
        Ok(text) => (Some(text), None),
        Err(Failure(code, msg, text)) => (text, Some((code, msg))),
    };
    if let Some(text) = text {
        if let Err(Failure(code, msg, _)) = emit(&text, cli.output.as_deref(), out) {
            let _ = writeln!(err, "error: {msg}");
            return code;
        }
    }
    match failure {
        None => EXIT_OK,
        Some((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Table1 => Ok(cmd_table1()),
        Command::Sweep { config, panel } => cmd_sweep(config.as_deref(), *panel),
        Command::Simulate { config, scenario } => {
            cmd_simulate(config, scenario, cli.seed, cli.trials)
        }
        Command::SolveFair {
            element,
            coefficient,
            tolerance,
        } => cmd_solve_fair(*element, *coefficient, *tolerance),
    }
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure(EXIT_IO, format!("cannot write {}: {e}", path.display()), None)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure(EXIT_IO, format!("cannot write output: {e}"), None)),
    }
}

pub fn cmd_table1() -> String {
    let mut s = String::from(TABLE1_HEADER);
    s.push('\n');
    for row in table1() {
        s.push_str(&row.to_csv());
        s.push('\n');
    }
    s
}

/// CSV with a `p_e` column followed by one column per curve.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut s = String::from("p_e");
    for (label, _) in &result.curves {
        s.push(',');
        s.push_str(label);
    }
    s.push('\n');
    let mut order: Vec<usize> = (0..result.grid.len()).collect();
    order.sort_by(|&a, &b| result.grid[a].total_cmp(&result.grid[b]));
    for i in order {
        s.push_str(&fmt_num(result.grid[i]));
        for (_, curve) in &result.curves {
            s.push(',');
            s.push_str(&fmt_num(curve[i]));
        }
        s.push('\n');
    }
    s
}

fn default_sweep_base() -> ElementProfile {
    ElementProfile::new("default", 0.8, 0.8, 0.5).expect("valid profile")
}

fn cmd_sweep(config: Option<&Path>, panel: Panel) -> CmdResult {
    let (base, panel, grid) = match config {
        Some(path) => {
            let cfg = ScenarioConfig::load(path).map_err(input_err)?;
            let base = cfg.profiles().map_err(input_err)?.remove(0);
            let panel = match panel {
                Panel::A => cfg.panel_a(),
                Panel::B => cfg.panel_b(),
            };
            (base, panel, cfg.p_e_grid())
        }
        None => {
            let cfg_panel = match panel {
                Panel::A => crate::analytics::SweepPanel::default_a(),
                Panel::B => crate::analytics::SweepPanel::default_b(),
            };
            (default_sweep_base(), cfg_panel, crate::analytics::default_p_e_grid())
        }
    };
    let result = sweep_alice(&base, &panel, &grid).map_err(input_err)?;
    Ok(sweep_csv(&result))
}

/// Closed-form counterpart of a Monte Carlo scenario.
pub fn analytic_value(spec: &FrameworkSpec, scenario: Scenario) -> f64 {
    match scenario {
        Scenario::HonestFailure => justice_error(&spec.p_stars(), spec.noise().p_e())
            .expect("framework specs carry valid p* and QBER"),
        Scenario::CheatAlice => nested_prob_noisy(spec, Party::Alice),
        Scenario::CheatBob => nested_prob_noisy(spec, Party::Bob),
        Scenario::HonestCoin0 => 0.5,
    }
}

/// `|estimate − analytic|` in units of the estimate's standard error. A
/// zero standard error means the estimate is exact; any difference is then
/// infinitely far.
pub fn sigma_distance(stats: &TrialStats, analytic: f64) -> f64 {
    let diff = (stats.estimate - analytic).abs();
    if stats.std_error > 0.0 {
        diff / stats.std_error
    } else if diff <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn cmd_simulate(
    config: &Path,
    scenario: &str,
    seed: Option<u64>,
    trials: Option<u64>,
) -> CmdResult {
    let scenario: Scenario = scenario.parse().map_err(input_err)?;
    let cfg = ScenarioConfig::load(config).map_err(input_err)?;
    let spec = cfg.framework().map_err(input_err)?;
    let seed = seed.unwrap_or(cfg.seed);
    let trials = trials.unwrap_or(cfg.trials);
    let stats = estimate(&spec, scenario, trials, seed).map_err(input_err)?;
    let analytic = analytic_value(&spec, scenario);
    let distance = sigma_distance(&stats, analytic);
    let doc = simulate_json(scenario, &stats, analytic, distance);
    let text = format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"));
    if distance > SELF_CHECK_SIGMAS {
        return Err(Failure(
            EXIT_SELF_CHECK,
            format!("estimate is {distance:.2} standard errors from the closed form"),
            Some(text),
        ));
    }
    Ok(text)
}

fn simulate_json(scenario: Scenario, stats: &TrialStats, analytic: f64, distance: f64) -> Value {
    json!({
        "scenario": scenario.as_str(),
        "trials": stats.trials,
        "seed": stats.seed,
        "estimate": json_num(stats.estimate),
        "std_error": json_num(stats.std_error),
        "analytic": json_num(analytic),
        "sigma_distance": json_num(distance),
    })
}

fn cmd_solve_fair(
    element: FairElement,
    coefficient: Option<CoefficientArg>,
    tolerance: f64,
) -> CmdResult {
    let doc = match element {
        FairElement::Bbbg09 => {
            let coefficient = coefficient.map(Into::into).unwrap_or_default();
            let sol = solve_fair_bbbg09(coefficient, tolerance).map_err(input_err)?;
            json!({
                "element": "bbbg09",
                "alpha_sq": json_num(sol.alpha_sq),
                "beta_sq": json_num(sol.beta_sq),
                "common_cheat_prob": json_num(sol.common_cheat_prob),
                "framework_bias": json_num(sol.framework_bias),
                "coefficient_used": sol.coefficient_used.as_str(),
                "residual": json_num(sol.residual),
            })
        }
        FairElement::Chailloux => {
            if coefficient.is_some() {
                return Err(input_err("--coefficient only applies to bbbg09"));
            }
            let c = fair_chailloux();
            json!({
                "element": "chailloux",
                "common_cheat_prob": json_num(c.common_cheat_prob),
                "framework_cheat_prob": json_num(c.framework_cheat_prob),
                "framework_bias": json_num(c.framework_bias),
            })
        }
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")))
}
