//! `oufield` command-line front end.
//!
//! Exit codes: 0 on success or a passing verification, 1 when a verification
//! suite fails, 2 on usage, domain or I/O errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use oufield::kernels::covariance_matrix;
use oufield::sampling::{write_samples_csv, GENERATOR_ID};
use oufield::suites::{falsify_suite, identity_suite, montecarlo_suite, SuiteOutcome};
use oufield::Family;

use config::{Defaults, Flags, RunConfig};

/// Default grid size of the identity suite.
const IDENTITY_GRID: usize = 15;

#[derive(Parser, Debug)]
#[command(name = "oufield", version, about = "Planar Gaussian fields as scaled OU fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a covariance kernel
    Kernel {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Draw seeded samples of a field on a grid and write them as CSV
    Sample(Flags),
    /// Run a verification suite and write a JSON report
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Subcommand, Debug)]
enum KernelAction {
    /// Print the kernel value at `--points s1,t1,s2,t2`
    Eval(Flags),
    /// Write the covariance matrix over the grid as CSV
    Matrix(Flags),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Suite {
    Identity,
    Montecarlo,
    Falsify,
    All,
}

enum Outcome {
    Done,
    Verified(bool),
}

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<(), String> {
    match &cfg.out {
        Some(path) => fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    }
}

fn kernel_eval(cfg: &RunConfig) -> Result<Outcome, String> {
    let family = cfg.family()?;
    let p = cfg.points.as_deref().ok_or("--points s1,t1,s2,t2 is required")?;
    let [s1, t1, s2, t2] = p else {
        return Err(format!("--points needs exactly 4 numbers, got {}", p.len()));
    };
    let value = family
        .kernel()
        .and_then(|k| k.eval(*s1, *t1, *s2, *t2))
        .map_err(|e| e.to_string())?;
    emit(cfg, format!("{value}\n").as_bytes())?;
    Ok(Outcome::Done)
}

fn grid_header(out: &mut String, family: &Family, cfg: &RunConfig) -> Result<oufield::GridSpec, String> {
    let grid = cfg.grid(family)?;
    let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
    writeln!(out, "# family: {}", family.name()).unwrap();
    writeln!(out, "# kernel: {}", family.kernel().map_err(|e| e.to_string())?.label()).unwrap();
    writeln!(out, "# grid: {}x{}", grid.n_s(), grid.n_t()).unwrap();
    writeln!(out, "# s_points: {}", join(grid.s_points())).unwrap();
    writeln!(out, "# t_points: {}", join(grid.t_points())).unwrap();
    Ok(grid)
}

fn kernel_matrix(cfg: &RunConfig) -> Result<Outcome, String> {
    let family = cfg.family()?;
    let mut out = String::new();
    let grid = grid_header(&mut out, &family, cfg)?;
    writeln!(out, "# index: i*n_t+j").unwrap();
    let kernel = family.kernel().map_err(|e| e.to_string())?;
    let m = covariance_matrix(&kernel, &grid).map_err(|e| e.to_string())?;
    for row in m.row_iter() {
        let line: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(out, "{}", line.join(",")).unwrap();
    }
    emit(cfg, out.as_bytes())?;
    Ok(Outcome::Done)
}

fn sample(cfg: &RunConfig) -> Result<Outcome, String> {
    let family = cfg.family()?;
    let grid = cfg.grid(&family)?;
    let sampler = match (&family, family.representation()) {
        (Family::Ou(_), _) => "ou-via-wiener",
        (_, Ok(Some(_))) => "bridge-via-wiener",
        _ => "dense",
    };
    let samples = family.sample(&grid, cfg.seed, cfg.replicates).map_err(|e| e.to_string())?;
    let meta: Vec<(String, String)> = [
        ("family", family.name().to_string()),
        ("kernel", family.kernel().map_err(|e| e.to_string())?.label()),
        ("sampler", sampler.to_string()),
        ("seed", cfg.seed.to_string()),
        ("generator", GENERATOR_ID.to_string()),
        ("replicates", cfg.replicates.to_string()),
        ("grid", format!("{}x{}", grid.n_s(), grid.n_t())),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let mut buf = Vec::new();
    write_samples_csv(&mut buf, &grid, &samples, &meta).map_err(|e| e.to_string())?;
    emit(cfg, &buf)?;
    Ok(Outcome::Done)
}

fn verify(suite: Suite, cfg: &RunConfig) -> Result<Outcome, String> {
    let suite_cfg = cfg.suite_config()?;
    let outcome = match suite {
        Suite::Identity => identity_suite(&suite_cfg),
        Suite::Montecarlo => montecarlo_suite(&suite_cfg),
        Suite::Falsify => falsify_suite(&suite_cfg),
        Suite::All => {
            let mut id_cfg = suite_cfg.clone();
            if !cfg.grid_explicit {
                (id_cfg.n_s, id_cfg.n_t) = (IDENTITY_GRID, IDENTITY_GRID);
            }
            SuiteOutcome::merge(
                "all",
                vec![identity_suite(&id_cfg), falsify_suite(&suite_cfg), montecarlo_suite(&suite_cfg)],
            )
        }
    };
    for r in &outcome.reports {
        eprintln!("{}", r.summary());
    }
    let mut json = serde_json::to_string_pretty(&outcome).map_err(|e| e.to_string())?;
    json.push('\n');
    emit(cfg, json.as_bytes())?;
    Ok(Outcome::Verified(outcome.pass))
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let small = Defaults { grid: 6, replicates: 1 };
    let (flags, defaults) = match &cli.command {
        Command::Kernel {
            action: KernelAction::Eval(f) | KernelAction::Matrix(f),
        } => (f, small),
        Command::Sample(f) => (f, small),
        Command::Verify { suite, flags } => (
            flags,
            Defaults {
                grid: if *suite == Suite::Identity { IDENTITY_GRID } else { 6 },
                replicates: 100_000,
            },
        ),
    };
    let cfg = RunConfig::resolve(flags, defaults)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| match &cli.command {
        Command::Kernel {
            action: KernelAction::Eval(_),
        } => kernel_eval(&cfg),
        Command::Kernel {
            action: KernelAction::Matrix(_),
        } => kernel_matrix(&cfg),
        Command::Sample(_) => sample(&cfg),
        Command::Verify { suite, .. } => verify(*suite, &cfg),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) | Ok(Outcome::Verified(true)) => ExitCode::SUCCESS,
        Ok(Outcome::Verified(false)) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
