//! Command-line runner: `degenheat <mode> --config <path> [--out <prefix>]`.
//!
//! Exit codes: 0 success, 2 configuration, usage or contract errors, 3 solver
//! failures, 4 geometry errors. Files are written only once every computation
//! of the run has finished.

mod config;

pub use config::{Experiment, ExperimentConfig, GridConfig, Mode, TimeConfig, Tolerances};

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::diagnostics::{self, report, EnergyOptions, TrajectoryKind};
use crate::error::{Error, Result};
use crate::parabolic::{solve_limit, solve_penalized};
use crate::stationary::{solve_stationary_limit, solve_stationary_penalized, stationary_energy};

#[derive(Debug, Parser)]
#[command(
    name = "degenheat",
    version,
    about = "Penalized heat equations with degenerate potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Penalized trajectory for one lambda.
    Solve(RunArgs),
    /// Masked limit trajectory.
    Limit(RunArgs),
    /// Stationary penalized or limit field.
    Stationary(RunArgs),
    /// Convergence of penalized runs to the limit across a lambda list.
    Sweep(RunArgs),
    /// Exponential decay away from the vanishing set across a lambda list.
    Decay(RunArgs),
    /// Energy inequalities of one run.
    Check(RunArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<String>,
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Solver { .. } => 3,
        Error::Geometry(_) => 4,
        _ => 2,
    }
}

/// Runs with the process streams.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (mode, args) = match cli.command {
        Command::Solve(a) => (Mode::Solve, a),
        Command::Limit(a) => (Mode::Limit, a),
        Command::Stationary(a) => (Mode::Stationary, a),
        Command::Sweep(a) => (Mode::Sweep, a),
        Command::Decay(a) => (Mode::Decay, a),
        Command::Check(a) => (Mode::Check, a),
    };
    match execute(mode, &args) {
        Ok((files, summary)) => match write_outputs(&files) {
            Ok(()) => {
                let _ = stdout.write_all(summary.as_bytes());
                0
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                exit_code(&e)
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn write_outputs(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    for (path, bytes) in files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, bytes)?;
    }
    Ok(())
}

fn output_path(prefix: &str, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{prefix}_{suffix}.csv"))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

type Outputs = (Vec<(PathBuf, Vec<u8>)>, String);

fn execute(mode: Mode, args: &RunArgs) -> Result<Outputs> {
    let config = ExperimentConfig::load(&args.config)?;
    let prefix = args
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| format!("degenheat_{}", mode.name()));
    let experiment = config.experiment(mode)?;
    let mut s = String::new();
    let _ = writeln!(s, "degenheat {} ({})", mode.name(), display(&args.config));
    let mut files = Vec::new();
    match experiment {
        Experiment::Solve(p) | Experiment::Limit(p) => {
            let limit = mode == Mode::Limit;
            let traj = if limit {
                solve_limit(&p)?
            } else {
                solve_penalized(&p)?
            };
            let kind = if limit {
                TrajectoryKind::Limit
            } else {
                TrajectoryKind::Penalized
            };
            let energy = diagnostics::check_energy_bounds(
                &traj,
                &p,
                &EnergyOptions {
                    kind,
                    ..Default::default()
                },
            )?;
            let _ = writeln!(
                s,
                "grid {:?} interior nodes, {} steps to T = {}, lambda = {}",
                p.grid.counts(),
                p.time.steps(),
                p.time.horizon(),
                if limit { f64::INFINITY } else { p.lambda }
            );
            summarize_energy(&mut s, &energy);
            let mut buf = Vec::new();
            report::write_trajectory(&traj, &mut buf)?;
            let path = output_path(&prefix, "trajectory");
            let _ = writeln!(s, "trajectory -> {}", display(&path));
            files.push((path, buf));
        }
        Experiment::Check {
            problem,
            limit,
            derbound,
            tol_disc,
        } => {
            let traj = if limit {
                solve_limit(&problem)?
            } else {
                solve_penalized(&problem)?
            };
            let opts = EnergyOptions {
                kind: if limit {
                    TrajectoryKind::Limit
                } else {
                    TrajectoryKind::Penalized
                },
                tol_disc,
                derbound,
            };
            let energy = diagnostics::check_energy_bounds(&traj, &problem, &opts)?;
            let _ = writeln!(s, "tolerance tol_disc = {tol_disc}");
            summarize_energy(&mut s, &energy);
            let mut buf = Vec::new();
            report::write_energy(&energy, &mut buf)?;
            let path = output_path(&prefix, "energy");
            let _ = writeln!(s, "report -> {}", display(&path));
            files.push((path, buf));
        }
        Experiment::Sweep { problem, lambdas } => {
            let out = diagnostics::convergence_sweep(&problem, &lambdas)?;
            let _ = writeln!(
                s,
                "{:>14} {:>14} {:>14} {:>14} {:>8}",
                "lambda", "err_l2h1", "err_supl2", "pen_mass", "bound2"
            );
            for (r, b) in out.report.rows.iter().zip(&out.bound2_ratios) {
                let _ = writeln!(
                    s,
                    "{:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>8.4}",
                    r.lambda, r.err_l2h1, r.err_supl2, r.pen_mass, b
                );
            }
            let decreasing = out.report.decreasing_with(1, 0.01);
            let _ = writeln!(
                s,
                "strong convergence (err_l2h1 decreasing): {}",
                verdict(decreasing)
            );
            if let (Some(a), Some(b)) = (out.report.rows.first(), out.report.rows.last()) {
                let _ = writeln!(
                    s,
                    "err_l2h1 first/last {:.3e}, pen_mass first/last {:.3e}",
                    a.err_l2h1 / b.err_l2h1,
                    a.pen_mass / b.pen_mass
                );
            }
            let bounded = out
                .bound2_ratios
                .iter()
                .all(|r| *r <= 1.0 + config.tolerances.tol_disc);
            let _ = writeln!(s, "bound2 along the sweep: {}", verdict(bounded));
            let mut buf = Vec::new();
            report::write_sweep(&out.report, &mut buf)?;
            let path = output_path(&prefix, "sweep");
            let _ = writeln!(s, "report -> {}", display(&path));
            files.push((path, buf));
        }
        Experiment::Decay {
            problem,
            lambdas,
            epsilon,
        } => {
            let out = diagnostics::decay_sweep(&problem, &lambdas, epsilon)?;
            let _ = writeln!(
                s,
                "epsilon = {epsilon}, delta = {:.6e}, c_eps = {:.6e}",
                out.delta, out.c_eps
            );
            let _ = writeln!(
                s,
                "{:>12} {:>14} {:>14} {:>14} {:>14}",
                "lambda", "I_eps", "W", "scaled", "I_3eps"
            );
            for (r, i3) in out.report.rows.iter().zip(&out.i_3eps) {
                let _ = writeln!(
                    s,
                    "{:>12.4e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
                    r.lambda, r.i_eps, r.w, r.scaled, i3
                );
            }
            let bound = -0.8 * out.predicted_rate();
            let _ = writeln!(
                s,
                "decay rate: slope {:.6} vs {:.6} (residual {:.3e}): {}",
                out.report.slope,
                bound,
                out.report.residual,
                verdict(out.report.slope <= bound)
            );
            let (spread, drop) = (out.report.w_spread(), out.report.i_eps_drop());
            let _ = writeln!(
                s,
                "weighted integral W bounded: max/min {spread:.3e} (< 50), I_eps drop {drop:.3e} (> 1e4): {}",
                verdict(spread < 50.0 && drop > 1e4)
            );
            let _ = writeln!(
                s,
                "scaled quantity growth over the sweep: {:.3e}",
                out.report.scaled_growth()
            );
            let mut buf = Vec::new();
            report::write_decay(&out.report, &mut buf)?;
            let path = output_path(&prefix, "decay");
            let _ = writeln!(s, "report -> {}", display(&path));
            files.push((path, buf));
        }
        Experiment::Stationary { spec, limit } => {
            let u = if limit {
                solve_stationary_limit(&spec)?
            } else {
                solve_stationary_penalized(&spec)?
            };
            let (energy, objective) = stationary_energy(&spec, &u)?;
            let _ = writeln!(
                s,
                "lambda = {}",
                if limit { f64::INFINITY } else { spec.lambda }
            );
            let _ = writeln!(s, "energy E = {energy:.12e}, objective = {objective:.12e}");
            let _ = writeln!(
                s,
                "energy equality E = <f,u>: gap {:.3e}",
                (objective + energy).abs()
            );
            let mut buf = Vec::new();
            report::write_field(&u, &mut buf)?;
            let path = output_path(&prefix, "field");
            let _ = writeln!(s, "field -> {}", display(&path));
            files.push((path, buf));
        }
    }
    Ok((files, s))
}

fn summarize_energy(s: &mut String, report: &diagnostics::EnergyReport) {
    for r in &report.records {
        let _ = writeln!(
            s,
            "{:<18} lhs {:>14.6e} rhs {:>14.6e} ratio {:>8.4} {}",
            r.name,
            r.lhs,
            r.rhs,
            r.ratio,
            verdict(r.satisfied)
        );
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}
