//! `kwgmin`: ordering checks, figure data, theorem suites and sampling from
//! the command line.
//!
//! Exit status is 0 when everything matched, 1 on a mismatch (expectation,
//! failed trial, figure not reproduced, sampling disagreement) and 2 on error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use kwgmin::figures::{reproduce, FigureId};
use kwgmin::montecarlo::pair_seed;
use kwgmin::scenario::{run_check, simulate, RunOptions, Scenario};
use kwgmin::theorems::{verify_theorem, TheoremId};

#[derive(Parser)]
#[command(
    name = "kwgmin",
    version,
    about = "Stochastic ordering checks for minima of Kumaraswamy-G samples"
)]
struct Cli {
    /// Grid size (default 2001)
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Double the grid until the verdict is stable
    #[arg(long, global = true)]
    refine: bool,
    /// Slope tolerance for monotonicity scans; pointwise tolerance is a tenth of it
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the relations of a scenario file against its expectations
    Check { scenario: PathBuf },
    /// Write the CSV of a figure (3.1, 3.2i, 3.2ii, 4.1i, 4.1ii, 4.2)
    Reproduce {
        figure: String,
        /// CSV path; the verdict line goes to PATH.verdict. Without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomised theorem suite
    Verify {
        theorem: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Sample both minima and compare with the analytic st verdict
    Simulate {
        scenario: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        size: usize,
        /// Defaults to the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn load(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Scenario::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    print!("{text}");
    if let Some(p) = output {
        fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let opts = RunOptions {
        grid_points: cli.grid_points,
        refine: cli.refine,
        tol: cli.tol,
    };
    match cli.command {
        Command::Check { scenario } => {
            let s = load(&scenario)?;
            let r = run_check(&s, &opts)?;
            emit(&r.text, s.output.as_deref())?;
            Ok(r.matched())
        }
        Command::Reproduce { figure, out } => {
            let id: FigureId = figure.parse()?;
            let d = reproduce(id, opts.grid_points)?;
            let line = d.verdict_line();
            match out {
                Some(p) => {
                    fs::write(&p, d.csv()).with_context(|| format!("writing {}", p.display()))?;
                    let mut side = p.clone().into_os_string();
                    side.push(".verdict");
                    fs::write(&side, format!("{line}\n")).context("writing verdict sidecar")?;
                    println!("{line}");
                }
                None => {
                    print!("{}", d.csv());
                    eprintln!("{line}");
                }
            }
            Ok(d.reproduced())
        }
        Command::Verify {
            theorem,
            trials,
            seed,
        } => {
            let id: TheoremId = theorem.parse()?;
            let r = verify_theorem(id, trials, seed, &opts)?;
            print!("{}", r.text());
            Ok(r.all_passed())
        }
        Command::Simulate {
            scenario,
            size,
            seed,
        } => {
            let s = load(&scenario)?;
            let seed = seed.unwrap_or(s.seed);
            let r = simulate(&s, size, seed, &opts)?;
            let mut text = r.text;
            text.push_str(&format!("pair_seed={}\n", pair_seed(seed)));
            emit(&text, s.output.as_deref())?;
            Ok(r.st_agrees)
        }
    }
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
