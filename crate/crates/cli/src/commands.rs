use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use subdiff::fracops::TimeGrid;
use subdiff::l1::{cross_validate, fitted_order};
use subdiff::mittag_leffler::ml_eval;
use subdiff::norms::full_solution_norm;
use subdiff::{solve, MlParams};

use crate::error::{invalid, CliError, CliResult};
use crate::problem::ProblemFile;
use crate::studies::{max_per_alpha, stability_study, trace_study};
use crate::table::{Cell, Table};

#[derive(Debug, Parser)]
#[command(
    name = "subdiff",
    version,
    about = "Experiments for the time-fractional heat equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate E_{α,β}(z) at a list of points.
    Ml(MlArgs),
    /// Solve a problem file and print every mode trajectory.
    Solve(SolveArgs),
    /// Distance of the free evolution from rough initial data in H^s.
    TraceStudy(TraceArgs),
    /// Stability ratios over seeded random problems.
    StabilityStudy(StabilityArgs),
    /// Distance between the spectral and L1 solvers under refinement.
    Convergence(ConvergenceArgs),
}

impl Command {
    pub fn out(&self) -> Option<&PathBuf> {
        match self {
            Command::Ml(a) => a.out.as_ref(),
            Command::Solve(a) => a.out.as_ref(),
            Command::TraceStudy(a) => a.out.as_ref(),
            Command::StabilityStudy(a) => a.out.as_ref(),
            Command::Convergence(a) => a.out.as_ref(),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MlArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Comma-separated evaluation points.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub z: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TraceArgs {
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Comma-separated spatial orders in [-1, 1].
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-0.5"
    )]
    pub s: Vec<f64>,
    /// Number of time cells.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, default_value_t = 256)]
    pub modes: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = PI)]
    pub length: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StabilityArgs {
    /// Comma-separated orders in (1/2, 1).
    #[arg(long, value_delimiter = ',', default_value = "0.6,0.75,0.9")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub modes: usize,
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = PI)]
    pub length: f64,
    /// Multiplies initial data and forcing.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub refinements: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A finished table, plus the numerical failure to report after writing it.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub failure: Option<CliError>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Self {
            table,
            failure: None,
        }
    }
}

pub fn run(command: &Command) -> CliResult<Report> {
    match command {
        Command::Ml(a) => run_ml(a),
        Command::Solve(a) => run_solve(a).map(Report::from),
        Command::TraceStudy(a) => run_trace(a).map(Report::from),
        Command::StabilityStudy(a) => run_stability(a).map(Report::from),
        Command::Convergence(a) => run_convergence(a).map(Report::from),
    }
}

pub fn run_ml(args: &MlArgs) -> CliResult<Report> {
    let params = MlParams::new(args.alpha, args.beta)?;
    if let Some(z) = args.z.iter().find(|z| !z.is_finite()) {
        return Err(invalid(format!("z = {z} is not finite")));
    }
    let mut table = Table::new(args, vec!["z", "value", "status"]);
    let mut failure = None;
    for &z in &args.z {
        match ml_eval(params, z) {
            Ok(v) => table.push(vec![z.into(), v.value.into(), "ok".into()]),
            Err(e) => {
                table.push(vec![z.into(), f64::NAN.into(), "uncertified".into()]);
                table.note(e.to_string());
                failure.get_or_insert(CliError::from(e));
            }
        }
    }
    Ok(Report { table, failure })
}

pub fn run_solve(args: &SolveArgs) -> CliResult<Table> {
    let problem = ProblemFile::read(&args.problem)?.into_problem()?;
    let sol = solve(&problem)?;
    let mut table = Table::new(args, vec!["t", "k", "d_k"]);
    let grid = problem.grid();
    for (i, t) in grid.nodes().enumerate() {
        for (k, d) in sol.traj.modes().iter().enumerate() {
            table.push(vec![t.into(), (k + 1).into(), d.values()[i].into()]);
        }
    }
    let (energy, fractional) = full_solution_norm(problem.alpha(), &sol.traj)?;
    table.note(format!("norm_L2_H1 = {energy:.16e}"));
    table.note(format!("norm_Halpha_Hminus1 = {fractional:.16e}"));
    Ok(table)
}

pub fn run_trace(args: &TraceArgs) -> CliResult<Table> {
    let grid = TimeGrid::new(args.t_end, args.grid)?;
    let study = trace_study(
        args.alpha,
        args.delta,
        &args.s,
        grid,
        args.modes,
        args.length,
    )?;
    let mut table = Table::new(args, vec!["s", "t", "distance", "asserted"]);
    for col in &study.columns {
        for (t, d) in study.times.iter().zip(&col.distance) {
            table.push(vec![
                col.s.into(),
                (*t).into(),
                (*d).into(),
                usize::from(col.asserted).into(),
            ]);
        }
    }
    let quarter = args.grid / 4;
    for col in &study.columns {
        if col.asserted {
            let ratio = col.distance[1] / col.distance[quarter];
            table.note(format!(
                "s = {}: distance(T/n) / distance(T/4) = {ratio:.6e}",
                col.s
            ));
        } else {
            table.note(format!(
                "s = {} >= 1 - 1/alpha = {:.6}: reported without assertion",
                col.s, study.threshold
            ));
        }
    }
    Ok(table)
}

pub fn run_stability(args: &StabilityArgs) -> CliResult<Table> {
    if args.trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if !(args.scale.is_finite() && args.scale != 0.0) {
        return Err(invalid("scale must be finite and nonzero"));
    }
    let grid = TimeGrid::new(args.t_end, args.grid)?;
    let rows = stability_study(
        &args.alpha,
        args.delta,
        args.trials,
        args.seed,
        args.modes,
        grid,
        args.length,
        args.scale,
    )?;
    let mut table = Table::new(args, vec!["alpha", "trial", "ratio", "caputo_ratio"]);
    for r in &rows {
        table.push(vec![
            r.alpha.into(),
            r.trial.into(),
            r.ratio.into(),
            r.caputo_ratio.into(),
        ]);
    }
    for (alpha, max) in max_per_alpha(&rows) {
        table.note(format!("max ratio alpha = {alpha}: {max:.16e}"));
    }
    Ok(table)
}

pub fn run_convergence(args: &ConvergenceArgs) -> CliResult<Table> {
    if args.refinements < 2 {
        return Err(invalid("refinements must be at least 2"));
    }
    let problem = ProblemFile::read(&args.problem)?.into_problem()?;
    let report = cross_validate(&problem, args.refinements)?;
    let mut table = Table::new(args, vec!["n", "distance", "fitted_order"]);
    for i in 0..report.rows.len() {
        let order = fitted_order(&report.rows[..=i]).unwrap_or(f64::NAN);
        let r = report.rows[i];
        table.push(vec![Cell::Int(r.n), r.distance.into(), order.into()]);
    }
    table.note(format!("monotone = {}", report.monotone));
    match report.order {
        Some(o) => table.note(format!("fitted order = {o:.6}")),
        None => table.note("fitted order undefined (a distance vanished)"),
    }
    Ok(table)
}
