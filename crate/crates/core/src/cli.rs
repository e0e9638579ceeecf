//! Command-line front end. Exit codes: 0 success, 1 usage or config
//! error, 2 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    basin_analysis, bistable_special_instance, classify_regime, parameter_sweep,
    perturb_special_case, BasinOptions, RegimeLabel, DEFAULT_DELTA,
};
use crate::dynamics::{integrate, IntegrateOptions, Tolerances};
use crate::equilibria::{find_rest_points, special_case_report, Region};
use crate::error::{Error, Result};
use crate::index::{
    curve_circle, curve_fig31, curve_fig32, curve_triangle, index_report, DEFAULT_RADIUS,
    JordanCurve,
};
use crate::io::{render_portrait, sweep_csv, to_json, trajectory_csv, write_atomic, Portrait, RunConfig};
use crate::model::{ModelParams, PlanarState};

#[derive(Debug, Parser)]
#[command(name = "sirs-open", version, about = "Equilibria, index and bistability analysis for the open-environment SIRS model")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Write the result to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for sampled probes and trajectories; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative integration tolerance; overrides the config.
    #[arg(long, global = true)]
    rtol: Option<f64>,
    /// Absolute integration tolerance; overrides the config.
    #[arg(long, global = true)]
    atol: Option<f64>,
    /// Suppress diagnostics on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regime verdict (rest points, boundary index, counts) as JSON.
    Analyze { config: PathBuf },
    /// Thresholds and boundary rest points when b = beta1 = gamma = 0, as JSON.
    SpecialCase { config: PathBuf },
    /// Trajectory CSV; `system`, initial state and `t_end` come from the config.
    Simulate { config: PathBuf },
    /// Index report along a curve: triangle, fig31, fig32 or circle@(x,y,r).
    Index {
        config: PathBuf,
        /// Overrides the config key `curve`.
        #[arg(long)]
        curve: Option<String>,
    },
    /// Basin report as JSON.
    Basins {
        config: PathBuf,
        /// Also write a portrait with the stable manifold here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Regime grid CSV over `axis1` and `axis2`.
    Sweep { config: PathBuf },
    /// SVG phase portrait.
    Portrait { config: PathBuf },
    /// Config of a certified two-sinks-one-saddle instance.
    MakeBistable {
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
        #[arg(long)]
        lambda: f64,
        /// Position of T0/T1 inside its admissible interval.
        #[arg(long, default_value_t = 0.5)]
        fraction: f64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let quiet = cli.global.quiet;
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            if !quiet {
                eprintln!("error: {}: {e}", e.contract());
            }
            if e.is_usage() {
                1
            } else {
                2
            }
        }
    }
}

fn load(path: &Path, g: &Global) -> Result<RunConfig> {
    let mut c = RunConfig::from_file(path)?;
    if let Some(seed) = g.seed {
        c.set_option("seed", seed.to_string())?;
    }
    if let Some(v) = g.rtol {
        c.set_option("rtol", v.to_string())?;
    }
    if let Some(v) = g.atol {
        c.set_option("atol", v.to_string())?;
    }
    Ok(c)
}

fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn note(g: &Global, msg: &str) {
    if !g.quiet {
        eprintln!("{msg}");
    }
}

/// `triangle`, `fig31`, `fig32` or `circle@(x,y,r)`.
pub fn parse_curve(spec: &str, p: &ModelParams, c: &RunConfig) -> Result<JordanCurve> {
    let radius = c.f64_or("radius", DEFAULT_RADIUS)?;
    match spec.trim() {
        "triangle" => curve_triangle(c.f64_or("inset", 1e-4)?),
        "fig31" => curve_fig31(p, radius),
        "fig32" => curve_fig32(p, [radius; 3]),
        other => {
            let inner = other
                .strip_prefix("circle@(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::Config { line: 0, message: format!("unknown curve {other:?}") })?;
            let v: Vec<f64> = inner
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Config { line: 0, message: format!("bad circle {other:?}") })?;
            if v.len() != 3 {
                return Err(Error::Config { line: 0, message: format!("circle needs x,y,r: {other:?}") });
            }
            curve_circle([v[0], v[1]], v[2])
        }
    }
}

/// Planar trajectories from seeded random starts in the triangle.
pub fn sample_trajectories(
    p: &ModelParams,
    count: usize,
    seed: u64,
    t_end: f64,
    tol: Tolerances,
) -> Result<Vec<Vec<PlanarState>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (s, i) = (rng.gen::<f64>(), rng.gen::<f64>());
        if s + i > 1.0 {
            continue;
        }
        let traj = integrate(
            crate::dynamics::System::Planar,
            p,
            &[s, i],
            t_end,
            IntegrateOptions { tolerances: tol, max_step: None },
        )?;
        out.push(traj.states.iter().map(|x| PlanarState::new(x[0], x[1])).collect());
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { config } => {
            let c = load(config, g)?;
            let verdict = classify_regime(&c.params)?;
            note(g, &format!("regime {}", verdict.label));
            emit(g, &(to_json(&verdict)? + "\n"))
        }
        Command::SpecialCase { config } => {
            let c = load(config, g)?;
            emit(g, &(to_json(&special_case_report(&c.params)?)? + "\n"))
        }
        Command::Simulate { config } => {
            let c = load(config, g)?;
            let system = c.system()?;
            let x0 = c.initial_state(system)?;
            let t_end = c.f64_or("t_end", 100.0)?;
            let traj = integrate(
                system,
                &c.params,
                &x0,
                t_end,
                IntegrateOptions { tolerances: c.tolerances()?, max_step: None },
            )?;
            emit(g, &trajectory_csv(&traj))
        }
        Command::Index { config, curve } => {
            let c = load(config, g)?;
            let spec = curve.clone().or_else(|| c.option("curve").map(str::to_string));
            let curve = parse_curve(spec.as_deref().unwrap_or("triangle"), &c.params, &c)?;
            emit(g, &(to_json(&index_report(&c.params, &curve)?)? + "\n"))
        }
        Command::Basins { config, svg } => {
            let c = load(config, g)?;
            let verdict = classify_regime(&c.params)?;
            let opts = BasinOptions {
                grid: c.usize_or("grid", 20)?,
                random_probes: c.usize_or("probes", 0)?,
                seed: c.seed()?,
                tolerances: c.tolerances()?,
            };
            let report = basin_analysis(&c.params, &verdict, &opts)?;
            note(
                g,
                &format!(
                    "side test agreement {:.4} over {} probes",
                    report.side_test.agreement(),
                    report.side_test.compared
                ),
            );
            if let Some(path) = svg {
                let portrait = Portrait {
                    rest_points: &verdict.rest_points,
                    basins: Some(&report),
                    trajectories: &[],
                    title: Some("basins"),
                };
                write_atomic(path, &render_portrait(&c.params, &portrait))?;
            }
            emit(g, &(to_json(&report)? + "\n"))
        }
        Command::Sweep { config } => {
            let c = load(config, g)?;
            let grid = parameter_sweep(&c.params, &c.axis("axis1")?, &c.axis("axis2")?)?;
            note(
                g,
                &format!(
                    "A {} / B {} / degenerate {} / errors {}",
                    grid.count(RegimeLabel::UniqueGas),
                    grid.count(RegimeLabel::TwoSinksOneSaddle),
                    grid.count(RegimeLabel::DegenerateDetected),
                    grid.errors()
                ),
            );
            emit(g, &sweep_csv(&grid))
        }
        Command::Portrait { config } => {
            let c = load(config, g)?;
            let p = c.params;
            let tol = c.tolerances()?;
            let rest = find_rest_points(&p, Region::Triangle)?;
            let trajectories = sample_trajectories(
                &p,
                c.usize_or("trajectories", 12)?,
                c.seed()?,
                c.f64_or("t_end", 50.0)?,
                tol,
            )?;
            let basins = if p.is_general_case() {
                match classify_regime(&p) {
                    Ok(v) if v.label == RegimeLabel::TwoSinksOneSaddle => {
                        let opts = BasinOptions { grid: 4, tolerances: tol, ..Default::default() };
                        Some(basin_analysis(&p, &v, &opts)?)
                    }
                    _ => None,
                }
            } else {
                None
            };
            let portrait = Portrait {
                rest_points: &rest.points,
                basins: basins.as_ref(),
                trajectories: &trajectories,
                title: None,
            };
            emit(g, &render_portrait(&p, &portrait))
        }
        Command::MakeBistable { eps1, eps2, lambda, fraction, alpha, delta } => {
            let special = bistable_special_instance(*eps1, *eps2, *lambda, *fraction, *alpha)?;
            let pert = perturb_special_case(&special, *delta)?;
            note(g, &format!("regime {} at delta {}", pert.verdict.label, pert.delta));
            let header = format!(
                "# two sinks and a saddle: eps1={eps1} eps2={eps2} lambda={lambda} fraction={fraction} delta={}\n",
                pert.delta
            );
            emit(g, &(header + &RunConfig::new(pert.params).to_text()))
        }
    }
}
