//! `ellip`: evaluation, verification suites, sweeps and comparisons on `E(1,1,p)`.
//!
//! Exit codes: 0 when every assertion passes, 1 when one fails (the report is
//! still written and the first failing record is named on stderr), 2 for usage
//! or domain errors (nothing is written).

mod commands;
mod parse;
mod report;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use commands::{Ctx, Emit};
use report::{Format, Report};
use suites::{Suite, SuiteOptions};

#[derive(Parser, Debug)]
#[command(name = "ellip", version, about = "Invariant metrics on the complex ellipsoid |z|² + |w|^{2p} < 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Ellipsoid exponent p.
    #[arg(long, value_parser = parse::positive, allow_hyphen_values = true)]
    p: f64,
    /// Yin metric parameter a.
    #[arg(long, default_value_t = 1.0, value_parser = parse::positive)]
    a: f64,
    /// Assertion tolerance.
    #[arg(long, default_value_t = 1e-9, value_parser = parse::positive)]
    tol: f64,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every quantity at one point.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Point "z,w", e.g. "0.3+0.1i,0.2".
        #[arg(long, value_parser = parse::pair, allow_hyphen_values = true)]
        point: [Complex64; 2],
        /// Tangent direction "v1,v2".
        #[arg(long, value_parser = parse::pair, default_value = "1,0", allow_hyphen_values = true)]
        direction: [Complex64; 2],
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Random points for sampled suites.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate along a linear path.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Path such as "z:0..0.999,w:0".
        #[arg(long, value_parser = parse::path)]
        path: parse::PathSpec,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Emit::All)]
        emit: Emit,
        /// Tangent direction; adds bracket columns to `--emit all`.
        #[arg(long, value_parser = parse::pair, allow_hyphen_values = true)]
        direction: Option<[Complex64; 2]>,
    },
    /// Yin metric against the Bergman metric at random points.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Curvature sign analysis of the Yin metric.
    YinCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Curvature floor D; the computed threshold when absent.
        #[arg(long, allow_hyphen_values = true)]
        d: Option<f64>,
        /// Number of X-grid points.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("ELLIP_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("ELLIP_THREADS must be a positive integer, got {v:?}"))?;
        anyhow::ensure!(n > 0, "ELLIP_THREADS must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn execute(command: Command) -> Result<(Report, Common)> {
    let run = |common: Common, f: &dyn Fn(&Ctx) -> Result<Report>| -> Result<(Report, Common)> {
        let ctx = Ctx::new(common.p, common.a, common.tol)?;
        Ok((f(&ctx)?, common))
    };
    match command {
        Command::Eval { common, point, direction } => {
            anyhow::ensure!(direction.iter().any(|c| c.norm() > 0.0), "--direction must be non-zero");
            run(common, &|ctx| commands::eval(ctx, point, direction))
        }
        Command::Verify { common, suite, count, seed } => {
            run(common, &|ctx| suites::run(ctx, suite, &SuiteOptions { count, seed }))
        }
        Command::Sweep { common, path, count, emit, direction } => {
            run(common, &|ctx| commands::sweep(ctx, &path, count, emit, direction))
        }
        Command::Compare { common, count, seed } => run(common, &|ctx| commands::compare(ctx, count, seed)),
        Command::YinCheck { common, m, n, d, grid } => run(common, &|ctx| {
            let records = suites::prop31(ctx, m, n, d, grid)?;
            let mut r = suites::records_report("yin-check", ctx, "prop31", records);
            r.param("m", report::Cell::Int(m.into()));
            r.param("n", report::Cell::Int(n.into()));
            r.param("grid", report::Cell::Int(grid as u64));
            Ok(r)
        }),
    }
}

fn emit(report: &Report, common: &Common) -> Result<()> {
    let bytes = report.render(common.format)?;
    match &common.out {
        Some(path) => report::write_atomic(path, &bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| execute(cli.command));
    let (report, common) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&report, &common) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match &report.first_failure {
        None => ExitCode::SUCCESS,
        Some(record) => {
            eprintln!("assertion failed: {record}");
            ExitCode::from(1)
        }
    }
}
