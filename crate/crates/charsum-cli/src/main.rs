//! `charsum` — run and verify resonance-bound sweeps over Dirichlet
//! character sums.
//!
//! Exit codes: 0 success, 1 invariant failure in some cell, 2 configuration
//! error, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charsum_cli::config::Config;
use charsum_cli::engine::{run_sweep, SweepResult};
use charsum_cli::report::emit_reports;
use charsum_core::moments::{theory_curve, validate_range};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "charsum",
    about = "Resonance lower bounds for Dirichlet character sums, verified by brute force",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the sweep described by a config file and write reports.
    Run { config: PathBuf },
    /// Run the sweep's invariant checks only; write nothing.
    Verify { config: PathBuf },
    /// Print the reference growth curve and the admissible-range check.
    Curve {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = charsum_cli::config::DEFAULT_DELTA)]
        delta: f64,
    },
}

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

fn load(path: &Path) -> Result<Config, ExitCode> {
    Config::load(path).map_err(|e| {
        eprintln!("config error: {e}");
        ExitCode::from(EXIT_CONFIG)
    })
}

fn summarize(sweep: &SweepResult) {
    println!(
        "{} cells: {} ok, {} failed, {} rejected",
        sweep.records.len(),
        sweep.n_ok,
        sweep.n_failed,
        sweep.n_rejected
    );
}

fn cmd_run(path: &Path) -> ExitCode {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let dir = match &cfg.output_dir {
        Some(d) => d.clone(),
        None => {
            eprintln!("config error: output.dir is required for run");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let sweep = run_sweep(&cfg);
    match emit_reports(&dir, &cfg, &sweep.records) {
        Ok(paths) => {
            summarize(&sweep);
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("i/o error: cannot write reports under {}: {e}", dir.display());
            return ExitCode::from(EXIT_IO);
        }
    }
    if sweep.n_failed > 0 {
        ExitCode::from(EXIT_INVARIANT)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_verify(path: &Path) -> ExitCode {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let sweep = run_sweep(&cfg);
    for r in &sweep.records {
        let detail = r.error.as_deref().unwrap_or("");
        println!(
            "q={} N={} f={}:{} {}{}{}",
            r.q,
            r.n,
            r.f_kind,
            r.f_seed,
            r.status,
            if detail.is_empty() { "" } else { " — " },
            detail
        );
    }
    summarize(&sweep);
    if sweep.n_failed > 0 {
        ExitCode::from(EXIT_INVARIANT)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_curve(q: u64, n: u64, delta: f64) -> ExitCode {
    if n < 1 {
        eprintln!("config error: --n must be >= 1");
        return ExitCode::from(EXIT_CONFIG);
    }
    let range = match validate_range(q, n, delta) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    println!("q = {q}");
    println!("N = {n}");
    match theory_curve(q, n) {
        Some(v) => {
            println!("theory_curve = {v}");
            println!("theory_curve/sqrt(N) = {}", v / (n as f64).sqrt());
        }
        None => println!("theory_curve = undefined (q/N <= e^e)"),
    }
    println!(
        "range: lower = {}, upper = {}, admissible = {}",
        range.lower, range.upper, range.ok
    );
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Run { config } => cmd_run(&config),
        Cmd::Verify { config } => cmd_verify(&config),
        Cmd::Curve { q, n, delta } => cmd_curve(q, n, delta),
    }
}
