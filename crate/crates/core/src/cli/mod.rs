//! Config-driven experiment runner behind the `hyperlag` binary.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 numeric failure. Failures
//! print a one-line JSON error object to stderr.

mod config;

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

pub use config::{ExperimentBlock, ExperimentConfig, GroupSpec, OrbitInit, QkBlock, SolverBlock};

use crate::error::{Error, Result};
use crate::geometry::{dist, exp_map, log_map, BoundaryPoint, DiskPoint, Geodesic, SampledCurve, TangentVec};
use crate::lagrangian::{ActionBoundLedger, ELState, StepControl, SUPERQUADRATIC_C};
use crate::minimizer::{minimize_w, replay, solve_bvp, twist_step, w_sum, BVProblem, TwistSettings};
use crate::qg::{
    choose_k_prime, compute_constants, default_lambda_grid, measured_speed_bound, qg_check, qg_fit,
    reports_to_csv, shadow_experiment, PropConstants, ShadowSettings,
};
use crate::semiconj::{
    alpha_margin, choose_alpha, orbit_report, qk_flags, two_sided_orbit, OrbitShadow, StartSet,
    DEFAULT_ALPHA_BUDGET,
};
use config::need;

#[derive(Debug, Parser)]
#[command(name = "hyperlag", version, about = "Minimizers of time-periodic mechanical Lagrangians on a genus-two hyperbolic surface")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Overrides `seed` in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Validate the config and print the resolved parameters without running.
    #[arg(long, global = true)]
    pub dry_run: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Distance, geodesic, projection, exp and log queries, one per stdin row.
    Geom,
    /// Minimizing segment between two points.
    Minimize,
    /// Minimizers from Γ(−KN) to Γ(KN) compared with Γ.
    Shadow,
    /// Quasi-geodesic fit and check of a curve CSV.
    Qg,
    /// The constant chain for a given K.
    Constants,
    /// Twist-map orbit or critical sequence of the discrete action.
    Twist,
    /// Shadow geodesics, averaged projection and displacement rate of orbits.
    Semiconj,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Geom => "geom",
            Command::Minimize => "minimize",
            Command::Shadow => "shadow",
            Command::Qg => "qg",
            Command::Constants => "constants",
            Command::Twist => "twist",
            Command::Semiconj => "semiconj",
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Io(_)
            | Error::InvalidArgument(_)
            | Error::InvalidInterval { .. }
            | Error::BelowThreshold { .. }
            | Error::NoAdmissibleKPrime { .. }
            | Error::HorizonExceeded { .. }
            | Error::SurgeryConstraint(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn non_convergence(what: &str) -> Failure {
    Failure {
        code: 2,
        kind: "non_convergence".into(),
        message: format!("{what} did not converge; outputs were written for inspection"),
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with(
    args: impl IntoIterator<Item = OsString>,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
        }
    };
    match run(&cli, stdin, stdout) {
        Ok(()) => 0,
        Err(f) => {
            let line = json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
            let _ = writeln!(stderr, "{line}");
            f.code
        }
    }
}

/// Runs one parsed invocation on a dedicated pool of `--threads` workers.
pub fn run(cli: &Cli, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build()
        .map_err(|e| Failure::from(Error::InvalidArgument(e.to_string())))?;
    let (mut cfg, base) = match &cli.config {
        Some(p) => (
            ExperimentConfig::load(p)?,
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
        ),
        None if cli.command == Command::Geom => (ExperimentConfig::default(), PathBuf::new()),
        None => return Err(Error::InvalidArgument("--config is required".into()).into()),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if cli.dry_run {
        let ledger = pool.install(|| dry_run_ledger(cli.command, &cfg))?;
        let doc = json!({ "subcommand": cli.command.name(), "config": cfg, "ledger": ledger });
        writeln!(stdout, "{}", serde_json::to_string_pretty(&doc).unwrap()).map_err(io)?;
        return Ok(());
    }
    if cli.command == Command::Geom {
        return geom(stdin, stdout);
    }
    std::fs::create_dir_all(&cfg.output_dir).map_err(io)?;
    let written = pool.install(|| match cli.command {
        Command::Minimize => minimize(&cfg),
        Command::Shadow => shadow(&cfg),
        Command::Qg => qg(&cfg, &base),
        Command::Constants => constants(&cfg),
        Command::Twist => twist(&cfg),
        Command::Semiconj => semiconj(&cfg),
        Command::Geom => unreachable!(),
    });
    let (files, failure) = match written {
        Ok(files) => (files, None),
        Err((files, f)) => (files, Some(f)),
    };
    for f in files {
        writeln!(stdout, "{}", f.display()).map_err(io)?;
    }
    failure.map_or(Ok(()), Err)
}

fn io(e: std::io::Error) -> Failure {
    Error::Io(e.to_string()).into()
}

/// Files written so far, and an optional failure to report after listing them.
type Outcome = std::result::Result<Vec<PathBuf>, (Vec<PathBuf>, Failure)>;

fn early(e: impl Into<Failure>) -> (Vec<PathBuf>, Failure) {
    (Vec::new(), e.into())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> std::result::Result<PathBuf, Failure> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(io)?;
    Ok(path)
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn point(xy: [f64; 2]) -> Result<DiskPoint> {
    DiskPoint::new(xy[0], xy[1])
}

fn ledger_of(cfg: &ExperimentConfig) -> Result<ActionBoundLedger> {
    let e = &cfg.experiment;
    let base = cfg.lagrangian()?.ledger();
    Ok(ActionBoundLedger::new(e.c.unwrap_or(SUPERQUADRATIC_C), e.v_min.unwrap_or(base.v_min)))
}

fn dry_run_ledger(cmd: Command, cfg: &ExperimentConfig) -> std::result::Result<serde_json::Value, Failure> {
    let ledger = ledger_of(cfg)?;
    let mut out = json!({ "C": ledger.c, "V_min": ledger.v_min, "K0": 28.0 * (-2.0 * ledger.v_min).max(0.0).sqrt() / ledger.c });
    let e = &cfg.experiment;
    match cmd {
        Command::Shadow => {
            let k = need(&e.k, "k")?;
            let kp = choose_k_prime(&ledger, k)?;
            out["K"] = json!(k);
            out["K_prime"] = json!(kp);
            out["N0"] = json!(e.n0.unwrap_or(2 * (k / kp).ceil() as u64));
        }
        Command::Constants => {
            out["constants"] = serde_json::to_value(constants_of(cfg)?).unwrap();
        }
        _ => {}
    }
    Ok(out)
}

fn geom(stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    for (lineno, line) in stdin.lines().enumerate() {
        let line = line.map_err(io)?;
        let row = line.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let out = geom_row(row).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("line {}: {m}", lineno + 1)),
            e => e,
        })?;
        writeln!(stdout, "{out}").map_err(io)?;
    }
    Ok(())
}

fn geom_row(row: &str) -> Result<String> {
    let mut parts = row.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty());
    let op = parts.next().unwrap_or_default();
    let args: Vec<f64> = parts
        .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
        .collect::<Result<_>>()?;
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!("{op} takes {n} numbers, got {}", args.len())))
        }
    };
    let p = |i: usize| DiskPoint::new(args[i], args[i + 1]);
    Ok(match op {
        "dist" => {
            arity(4)?;
            format!("dist,{}", dist(&p(0)?, &p(2)?))
        }
        "geodesic" => {
            arity(4)?;
            let g = Geodesic::through(&p(0)?, &p(2)?)?;
            format!("geodesic,{},{}", g.xi_minus().theta(), g.xi_plus().theta())
        }
        "project" => {
            arity(6)?;
            let g = Geodesic::through(&p(0)?, &p(2)?)?;
            let (foot, s) = g.project(&p(4)?)?;
            format!("project,{},{},{}", foot.x(), foot.y(), s)
        }
        "exp" => {
            arity(5)?;
            let q = exp_map(&TangentVec::new(p(0)?, Complex64::new(args[2], args[3])), args[4])?;
            format!("exp,{},{}", q.x(), q.y())
        }
        "log" => {
            arity(4)?;
            let w = log_map(&p(0)?, &p(2)?);
            format!("log,{},{}", w.v.re, w.v.im)
        }
        _ => return Err(Error::Parse(format!("unknown query {op:?}; expected dist, geodesic, project, exp or log"))),
    })
}

fn minimize(cfg: &ExperimentConfig) -> Outcome {
    let e = &cfg.experiment;
    let l = cfg.lagrangian().map_err(early)?;
    let prob = (|| -> Result<BVProblem> {
        Ok(BVProblem::new(
            point(need(&e.x_a, "x_a")?)?,
            point(need(&e.x_b, "x_b")?)?,
            e.a.unwrap_or(0.0),
            need(&e.b, "b")?,
            cfg.solver.n,
        )
        .with_settings(cfg.solver_settings()))
    })()
    .map_err(early)?;
    let res = solve_bvp(&l, &prob).map_err(early)?;
    let dir = &cfg.output_dir;
    let mut files = Vec::new();
    let mut summary = serde_json::to_value(res.summary()).unwrap();
    summary["restart_actions"] = json!(res.restart_actions);
    for (name, text) in [("minimize.json", to_json(&summary)), ("minimize_curve.csv", res.curve.to_csv_string())] {
        files.push(write_file(dir, name, &text).map_err(|f| (files.clone(), f))?);
    }
    if !res.converged {
        return Err((files, non_convergence("the boundary-value solve")));
    }
    Ok(files)
}

#[derive(Serialize)]
struct ShadowDoc<'a> {
    n0_used: u64,
    constants: PropConstants,
    reports: Vec<&'a crate::qg::ShadowReport>,
}

fn shadow(cfg: &ExperimentConfig) -> Outcome {
    let e = &cfg.experiment;
    let run = || -> Result<_> {
        let l = cfg.lagrangian()?;
        let ledger = ledger_of(cfg)?;
        let k = need(&e.k, "k")?;
        let n_list = need(&e.n_list, "n_list")?;
        let angles = need(&e.gamma, "gamma")?;
        let m = (-2.0 * ledger.v_min).max(0.0).sqrt();
        let k0 = 28.0 * m / ledger.c;
        if !(k > k0) {
            return Err(Error::BelowThreshold { k, k0 });
        }
        let kp = choose_k_prime(&ledger, k)?;
        let n0 = e.n0.unwrap_or(2 * (k / kp).ceil() as u64);
        let gamma = Geodesic::from_endpoints(BoundaryPoint::new(angles[0]), BoundaryPoint::new(angles[1]))?;
        let defaults = ShadowSettings::default();
        let settings = ShadowSettings {
            nodes_per_unit: e.nodes_per_unit.unwrap_or(defaults.nodes_per_unit),
            horizon: e.horizon.unwrap_or(defaults.horizon),
            qg_stride: e.qg_stride.unwrap_or(defaults.qg_stride),
            lambda_max: e.lambda_max.unwrap_or(defaults.lambda_max),
        };
        let rows = shadow_experiment(&l, &gamma, k, &n_list, n0, cfg.solver_settings(), settings)?;
        let reports: Vec<_> = rows.into_iter().map(|r| r.0).collect();
        let kappa = reports.iter().map(|r| r.chord_hausdorff).fold(0.0, f64::max);
        let constants = PropConstants::assemble(&ledger, k, kp, measured_speed_bound(&reports))?.with_kappa(kappa);
        Ok((n0, constants, reports))
    };
    let (n0, constants, reports) = run().map_err(early)?;
    let dir = &cfg.output_dir;
    let mut files = Vec::new();
    let doc = ShadowDoc {
        n0_used: n0,
        constants,
        reports: reports.iter().collect(),
    };
    for (name, text) in [("shadow.csv", reports_to_csv(&reports)), ("shadow.json", to_json(&doc))] {
        files.push(write_file(dir, name, &text).map_err(|f| (files.clone(), f))?);
    }
    if reports.iter().any(|r| !r.converged) {
        return Err((files, non_convergence("a shadowing minimizer")));
    }
    Ok(files)
}

fn qg(cfg: &ExperimentConfig, base: &Path) -> Outcome {
    let e = &cfg.experiment;
    let run = || -> Result<serde_json::Value> {
        let file = need(&e.curve_file, "curve_file")?;
        let path = if file.is_relative() { base.join(file) } else { file };
        let curve = SampledCurve::read_csv(&path)?;
        let stride = e.qg_stride.unwrap_or(1);
        let fit = qg_fit(&curve, &default_lambda_grid(e.lambda_max.unwrap_or(4.0)), stride)?;
        let check = match (e.lambda, e.epsilon) {
            (Some(l), Some(eps)) => Some(qg_check(&curve, l, eps, stride)?),
            (None, None) => None,
            _ => return Err(Error::InvalidArgument("experiment.lambda and experiment.epsilon go together".into())),
        };
        Ok(json!({ "samples": curve.len(), "stride": stride, "fit": fit, "check": check }))
    };
    let doc = run().map_err(early)?;
    Ok(vec![write_file(&cfg.output_dir, "qg.json", &to_json(&doc)).map_err(early)?])
}

fn constants_of(cfg: &ExperimentConfig) -> Result<PropConstants> {
    let e = &cfg.experiment;
    let ledger = ledger_of(cfg)?;
    let k = need(&e.k, "k")?;
    let kss = need(&e.k_speed_max, "k_speed_max")?;
    match e.k_prime {
        // an explicit K' evaluates the chain as given, admissible or not
        Some(kp) => PropConstants::assemble(&ledger, k, kp, kss),
        None => compute_constants(&ledger, k, kss),
    }
}

fn constants(cfg: &ExperimentConfig) -> Outcome {
    let c = constants_of(cfg).map_err(early)?;
    Ok(vec![write_file(&cfg.output_dir, "constants.json", &to_json(&c)).map_err(early)?])
}

fn twist(cfg: &ExperimentConfig) -> Outcome {
    let e = &cfg.experiment;
    let run = || -> Result<(serde_json::Value, Vec<DiskPoint>, Option<Vec<TangentVec>>)> {
        let l = cfg.lagrangian()?;
        let v = l.potential();
        let x0 = point(need(&e.x_a, "x_a")?)?;
        let steps = need(&e.steps, "steps")?;
        if let Some(p0) = e.p0 {
            let mut xs = vec![x0];
            let mut ps = vec![TangentVec::new(x0, Complex64::new(p0[0], p0[1]))];
            for _ in 0..steps {
                let (x, p) = twist_step(v, xs.last().unwrap(), ps.last().unwrap())?;
                xs.push(x);
                ps.push(p);
            }
            let doc = json!({ "mode": "orbit", "steps": steps, "w": w_sum(v, &xs) });
            Ok((doc, xs, Some(ps)))
        } else {
            let seq = minimize_w(v, &x0, &point(need(&e.x_b, "x_b")?)?, steps, TwistSettings::default())?;
            let replay_error = match &seq.momenta {
                Some(m) => Some(replay(v, &seq.points, &m[0])?),
                None => None,
            };
            let doc = json!({
                "mode": "critical_sequence",
                "steps": steps,
                "w": w_sum(v, &seq.points),
                "grad_norm": seq.grad_norm,
                "iterations": seq.iterations,
                "converged": seq.converged,
                "replay_error": replay_error.or(seq.replay_error),
            });
            Ok((doc, seq.points, seq.momenta))
        }
    };
    let (doc, xs, ps) = run().map_err(early)?;
    let mut csv = String::from(if ps.is_some() { "k,x,y,px,py\n" } else { "k,x,y\n" });
    for (k, x) in xs.iter().enumerate() {
        match &ps {
            Some(p) => csv.push_str(&format!("{k},{},{},{},{}\n", x.x(), x.y(), p[k].v.re, p[k].v.im)),
            None => csv.push_str(&format!("{k},{},{}\n", x.x(), x.y())),
        }
    }
    let mut files = Vec::new();
    for (name, text) in [("twist.csv", csv), ("twist.json", to_json(&doc))] {
        files.push(write_file(&cfg.output_dir, name, &text).map_err(|f| (files.clone(), f))?);
    }
    if doc["converged"] == json!(false) {
        return Err((files, non_convergence("the critical-sequence search")));
    }
    Ok(files)
}

fn semiconj(cfg: &ExperimentConfig) -> Outcome {
    let e = &cfg.experiment;
    let run = || -> Result<serde_json::Value> {
        let l = cfg.lagrangian()?;
        let inits = need(&e.orbits, "orbits")?;
        let t_max = need(&e.t_max, "t_max")?;
        let control = StepControl {
            output_spacing: Some(e.output_spacing.unwrap_or(0.05)),
            ..e.step_control.unwrap_or_default()
        };
        let curves: Vec<SampledCurve> = inits
            .par_iter()
            .map(|o| {
                let start = ELState::new(point(o.x)?, Complex64::new(o.v[0], o.v[1]), o.t0);
                two_sided_orbit(&l, &start, t_max, &control)
            })
            .collect::<Result<_>>()?;
        let shadows: Vec<OrbitShadow> = curves
            .iter()
            .map(|c| OrbitShadow::new(c.clone()))
            .collect::<Result<_>>()?;
        let choice = choose_alpha(&shadows, e.alpha_budget.unwrap_or(DEFAULT_ALPHA_BUDGET))?;
        let held_out = alpha_margin(&shadows, choice.alpha, StartSet::Midpoints);
        let constants = match &e.qk {
            Some(q) => Some(compute_constants(&ledger_of(cfg)?, q.k, q.k_speed_max)?),
            None => None,
        };
        let betas = e.beta_grid.clone().unwrap_or_else(|| vec![0.25, 0.5, 1.0, 2.0]);
        let tol = e.dstar_tolerance.unwrap_or(1e-2);
        let reports = shadows
            .par_iter()
            .zip(&curves)
            .map(|(s, c)| {
                let flags = match (&constants, &e.qk) {
                    (Some(pc), Some(q)) => Some(qk_flags(&l, c, pc, q.samples, cfg.solver_settings())?),
                    _ => None,
                };
                orbit_report(s, choice.alpha, &betas, tol, flags)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(json!({
            "alpha": choice,
            "held_out_margin": held_out,
            "qk_certificate": constants.map(|_| "tolerance-level; not a proof"),
            "orbits": reports,
        }))
    };
    let doc = run().map_err(early)?;
    Ok(vec![write_file(&cfg.output_dir, "semiconj.json", &to_json(&doc)).map_err(early)?])
}
