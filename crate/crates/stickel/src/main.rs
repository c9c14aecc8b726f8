use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stickel::harness::{self, ConfigFile, RunOptions};

#[derive(Parser)]
#[command(name = "stickel", version, about = "Stickelberger elements, regulators and augmentation quotients over F_q(t)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Theta(u) and theta on each layer
    Theta(Common),
    /// Theta against the per-character L-functions
    Interpolation(Common),
    /// theta = h det mod I^{r+1}, discriminants and bridges
    GrossCheck(Common),
    /// Refined Stark identity for n = 1 and supplied eps
    StarkCheck(Common),
    /// Burns matrix congruence a_n = h det A
    BurnsCheck(Common),
    /// theta_H = prod theta_chi over all subgroups
    ProductFormula(Common),
    /// f and xi identities on a rank-2 layer
    Factorization(Common),
    /// Filtration oracle over small p-groups
    AugOracle(Common),
    /// Fixed examples with known answers
    Selftest(Common),
    /// List the experiment kinds
    Kinds,
}

#[derive(Args)]
struct Common {
    /// TOML experiment file; defaults to the built-in preset
    #[arg(long)]
    config: Option<PathBuf>,
    /// write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// worker threads
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = RunOptions::default().seed)]
    seed: u64,
    /// include wall-clock timings (makes output nondeterministic)
    #[arg(long)]
    timing: bool,
}

fn kind_of(cmd: &Cmd) -> Option<(&'static str, &Common)> {
    Some(match cmd {
        Cmd::Theta(c) => ("theta", c),
        Cmd::Interpolation(c) => ("interpolation", c),
        Cmd::GrossCheck(c) => ("gross-check", c),
        Cmd::StarkCheck(c) => ("stark-check", c),
        Cmd::BurnsCheck(c) => ("burns-check", c),
        Cmd::ProductFormula(c) => ("product-formula", c),
        Cmd::Factorization(c) => ("factorization", c),
        Cmd::AugOracle(c) => ("aug-oracle", c),
        Cmd::Selftest(c) => ("selftest", c),
        Cmd::Kinds => return None,
    })
}

fn execute(kind: &str, c: &Common) -> Result<bool, String> {
    let text = match &c.config {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => harness::preset(kind).expect("every kind has a preset").to_string(),
    };
    let file = ConfigFile::parse(&text).map_err(|e| e.to_string())?;
    let opts = RunOptions { seed: c.seed, timing: c.timing };
    let run = || harness::run(kind, &file, &opts);
    let set = match c.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| e.to_string())?
            .install(run),
        None => run(),
    }
    .map_err(|e| e.to_string())?;
    let json = set.to_json();
    match &c.out {
        Some(p) => fs::write(p, json).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{json}"),
    }
    for r in &set.reports {
        for ch in r.checks.iter().filter(|ch| !ch.passed()) {
            eprintln!("FAILED {}/{}: {}", r.experiment, ch.id, ch.witness.as_deref().unwrap_or(""));
        }
    }
    Ok(set.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some((kind, common)) = kind_of(&cli.cmd) else {
        for k in harness::KINDS {
            println!("{k}");
        }
        return ExitCode::SUCCESS;
    };
    match execute(kind, common) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
