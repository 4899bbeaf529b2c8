mod cache;
mod commands;
mod config;
mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cache::CachedSource;
use crate::commands::{Outcome, Suite, VerifyArgs};
use crate::config::{Format, Overrides, RunConfig};

/// Exact certification of theta-function anomaly cancellation identities.
#[derive(Parser)]
#[command(name = "thetacert", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Truncation in half-integer steps: series are known below q^(ORDER/2).
    #[arg(long, global = true)]
    q_order: Option<u32>,
    /// Highest form degree kept in characteristic classes.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Tolerance for numeric checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// L-class convention: full or half.
    #[arg(long, global = true)]
    l_variant: Option<String>,
    /// Output format: json or table.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached theta expansions.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Flat key = value file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Count degenerate-zero results as passing.
    #[arg(long, global = true)]
    allow_degenerate: bool,
    /// Seed for numeric sample points.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print an exact series.
    Expand {
        #[command(subcommand)]
        target: ExpandTarget,
    },
    /// Extract b_r or z_r from the second theta bundle.
    Decompose {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        dim: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        dim: Option<u32>,
        /// P1, P2, Q1 or Q2 (routes suite).
        #[arg(long)]
        form: Option<String>,
        /// Single numeric law, e.g. theta-s or p-modular.
        #[arg(long)]
        law: Option<String>,
        /// Elliptic variable for a single numeric point, e.g. 0.1+0.2i.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        /// Modular variable for a single numeric point, e.g. 0.3+1.2i.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        /// Number of pseudo-random sample points per numeric law.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Re-render a stored report and exit with its verdict.
    Report { path: PathBuf },
}

#[derive(Subcommand)]
enum ExpandTarget {
    /// theta_i(0, tau) or its fourth power.
    ThetaNullwert {
        #[arg(long)]
        i: u32,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// One of delta1, eps1, delta2, eps2.
    DeltaEps {
        #[arg(long)]
        which: String,
    },
    /// Fourier coefficients of theta1 or theta2.
    ThetaBundle {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        dim: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Main,
    Decomposition,
    Agw,
    Corollaries,
    Routes,
    Numeric,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Main => Suite::Main,
            SuiteArg::Decomposition => Suite::Decomposition,
            SuiteArg::Agw => Suite::Agw,
            SuiteArg::Corollaries => Suite::Corollaries,
            SuiteArg::Routes => Suite::Routes,
            SuiteArg::Numeric => Suite::Numeric,
            SuiteArg::All => Suite::All,
        }
    }
}

fn overrides(g: &GlobalArgs) -> Overrides {
    Overrides {
        q_order: g.q_order,
        max_form_degree: g.max_degree,
        tolerance: g.tol,
        l_variant: g.l_variant.clone(),
        format: g.format.clone(),
        out: g.out.clone(),
        cache_dir: g.cache_dir.clone(),
        jobs: g.jobs,
        allow_degenerate: g.allow_degenerate,
        seed: g.seed,
    }
}

fn emit(cfg: &RunConfig, report: &Value) -> Result<()> {
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Table => render::table(report),
    };
    match &cfg.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn wrap(cfg: &RunConfig, outcome: &Outcome) -> Value {
    let mut config = cfg.to_json();
    if let (Value::Object(c), Value::Object(p)) = (&mut config, &outcome.params) {
        for (k, v) in p {
            c.insert(k.clone(), v.clone());
        }
    }
    json!({ "version": 1, "config": config, "results": outcome.results })
}

/// `Ok(true)` when everything verified.
fn run(cli: Cli) -> Result<bool> {
    let cfg = RunConfig::load(cli.global.config.as_deref(), &overrides(&cli.global))?;
    if let Command::Report { path } = &cli.command {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let report: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let results = report.get("results").and_then(Value::as_array).context("report has no results array")?;
        let ok = commands::stored_ok(results, cfg.allow_degenerate);
        emit(&cfg, &report)?;
        return Ok(ok);
    }
    let source = CachedSource::new(cfg.cache_dir.clone()).context("creating cache directory")?;
    let outcome = match cli.command {
        Command::Expand { target } => match target {
            ExpandTarget::ThetaNullwert { i, power } => commands::expand_nullwert(&cfg, i, power)?,
            ExpandTarget::DeltaEps { which } => commands::expand_delta_eps(&cfg, &which)?,
            ExpandTarget::ThetaBundle { kind, dim } => commands::expand_theta_bundle(&cfg, &kind, dim, &source)?,
        },
        Command::Decompose { m, dim } => commands::decompose(&cfg, m, dim, &source)?,
        Command::Verify { suite, m, dim, form, law, v, tau, samples } => {
            let args = VerifyArgs { m, dim, form, law, v, tau, samples };
            commands::verify(&cfg, suite.into(), &args, &source)?
        }
        Command::Report { .. } => unreachable!("handled above"),
    };
    emit(&cfg, &wrap(&cfg, &outcome))?;
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
