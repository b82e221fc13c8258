mod input;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hyperflow::curvature::curvature_state;
use hyperflow::flows::{self, FlowOptions, LinearSolver, Method, Regime, Termination};
use hyperflow::FlowTrace;

/// Sphere packing metrics and curvature flows on triangulated 3-manifolds
/// with boundary.
#[derive(Parser)]
#[command(name = "hyperflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Ricci,
    Calabi,
    Newton,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Auto,
    Dense,
    Cg,
}

#[derive(Subcommand)]
enum Command {
    /// Check a triangulation file and report its combinatorics.
    Validate {
        path: PathBuf,
        /// Emit JSON instead of the one-line summary.
        #[arg(long)]
        format: Option<Format>,
    },
    /// Evaluate vertex and edge curvatures at a metric.
    Curvature {
        path: PathBuf,
        /// Radii: `a,b,...`, `@file`, or a single value for every vertex.
        #[arg(long, default_value = "1")]
        radii: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Also emit the Jacobian of the curvature.
        #[arg(long)]
        jacobian: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drive the curvature to a target with a flow or Newton's method.
    Flow {
        path: PathBuf,
        #[arg(long, default_value = "1")]
        radii: String,
        /// Target curvature: `current`, `a,b,...`, `@file`, or a single value.
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "ricci")]
        method: MethodArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Accepted steps (flows) or iterations (Newton).
        #[arg(long)]
        max_iters: Option<usize>,
        /// Flow time limit.
        #[arg(long, default_value_t = 1e7)]
        max_time: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Trace destination; the summary goes to stderr when this is absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep every n-th sample of the trace (the last is always kept).
        #[arg(long, default_value_t = 1)]
        sample_every: usize,
        #[arg(long, value_enum, default_value = "auto", hide = true)]
        linear_solver: SolverArg,
    },
    /// Area and curvature thresholds for radii in `[c, M]`.
    Bounds {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        format: Option<Format>,
    },
}

fn exit_code(t: Termination) -> u8 {
    match t {
        Termination::Converged => 0,
        Termination::MaxIters => 3,
        Termination::MaxTime => 4,
        Termination::StepUnderflow => 5,
        Termination::LeftPositiveOrthant => 6,
        Termination::LineSearchFailure => 7,
    }
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn regime_of(tri: &hyperflow::Triangulation, trace: &FlowTrace, target: &[f64]) -> Option<Vec<Regime>> {
    (trace.min_radius < trace.max_radius)
        .then(|| flows::regime(tri, target, trace.max_radius, trace.min_radius).ok())
        .flatten()
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { path, format } => {
            let tri = input::load_triangulation(&path)?;
            let text = match format {
                Some(Format::Json) => report::validate_json(&tri)?,
                Some(Format::Csv) => anyhow::bail!("validate supports json output only"),
                None => report::validate_text(&tri),
            };
            print!("{text}");
            Ok(0)
        }
        Command::Curvature { path, radii, format, jacobian, out } => {
            let tri = input::load_triangulation(&path)?;
            let r = input::parse_radii(&radii, &tri)?;
            let state = curvature_state(&tri, &r)?;
            let text = match format {
                Format::Json => report::curvature_json(&tri, &state, jacobian)?,
                Format::Csv => report::curvature_csv(&tri, &state, jacobian)?,
            };
            let mut w = open_out(&out)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
            Ok(0)
        }
        Command::Flow {
            path,
            radii,
            target,
            method,
            tol,
            max_iters,
            max_time,
            format,
            out,
            sample_every,
            linear_solver,
        } => {
            let tri = input::load_triangulation(&path)?;
            let r0 = input::parse_radii(&radii, &tri)?;
            let k_target = input::parse_target(&target, &tri, &r0)?;
            let method = match method {
                MethodArg::Ricci => Method::Ricci,
                MethodArg::Calabi => Method::Calabi,
                MethodArg::Newton => Method::Newton,
            };
            let mut opts = FlowOptions::new(method, r0, k_target.clone());
            opts.tol = tol;
            opts.max_time = max_time;
            if let Some(n) = max_iters {
                opts.max_iters = n;
            }
            opts.linear_solver = match linear_solver {
                SolverArg::Auto => LinearSolver::Auto,
                SolverArg::Dense => LinearSolver::Dense,
                SolverArg::Cg => LinearSolver::SparseCg,
            };
            let trace = flows::run(&tri, &opts)?;
            let regime = regime_of(&tri, &trace, &k_target);
            let mut w = open_out(&out)?;
            match format {
                Format::Csv => report::trace_csv(&trace, sample_every, &mut w)?,
                Format::Json => report::trace_json(&trace, sample_every, regime.as_deref(), &mut w)?,
            }
            w.flush()?;
            drop(w);
            let line = report::summary(&trace, regime.as_deref());
            if out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(exit_code(trace.termination))
        }
        Command::Bounds { m, c, chi, d, format } => {
            let b = flows::bounds(m, c, chi, d)?;
            match format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&b)?),
                Some(Format::Csv) => anyhow::bail!("bounds supports json output only"),
                None => print!("{}", report::bounds_text(&b)),
            }
            Ok(0)
        }
    }
}

fn init_threads() -> Result<()> {
    if let Ok(value) = std::env::var("HYPERFLOW_THREADS") {
        let n: usize = value.trim().parse().with_context(|| format!("HYPERFLOW_THREADS={value:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
