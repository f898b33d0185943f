mod build;
mod converge;
mod evolve;
mod manifest;
mod verify;

use clap::{Parser, Subcommand};
use heatlab_core::analysis::Verdict;
use manifest::Run;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "heatlab", version, about = "Heat flow on annuli: data, evolution and convexity checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an initial datum and validate it.
    Build(build::BuildArgs),
    /// Evolve a datum and monitor the flow.
    Evolve(evolve::EvolveArgs),
    /// Run one of the verification pipelines.
    Verify(verify::VerifyArgs),
    /// Grid-convergence study of the solver.
    Converge(converge::ConvergeArgs),
}

/// Bad input that should exit with status 2 and write nothing.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Parameter errors from the library count as usage errors.
pub fn core_err(e: heatlab_core::Error) -> anyhow::Error {
    use heatlab_core::Error as E;
    match e {
        E::InvalidParameter { .. } | E::Parse(_) | E::DimensionMismatch { .. } | E::FrameMismatch => {
            usage(e.to_string())
        }
        other => other.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, out) = match &cli.cmd {
        Cmd::Build(a) => ("build", a.out.clone()),
        Cmd::Evolve(a) => ("evolve", a.out.clone()),
        Cmd::Verify(a) => ("verify", a.out.clone()),
        Cmd::Converge(a) => ("converge", a.out.clone()),
    };
    let mut run = Run::new(name, &out);
    let result = match &cli.cmd {
        Cmd::Build(a) => build::run(a, &mut run),
        Cmd::Evolve(a) => evolve::run(a, &mut run),
        Cmd::Verify(a) => verify::run(a, &mut run),
        Cmd::Converge(a) => converge::run(a, &mut run),
    };
    let verdict = match result {
        Ok(v) => v,
        Err(e) if e.is::<Usage>() => {
            eprintln!("heatlab: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("heatlab: {e:#}");
            run.manifest.note("error", format!("{e:#}").replace('\n', " "));
            Verdict::Fail
        }
    };
    for w in &run.manifest.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = run.finish(verdict) {
        eprintln!("heatlab: could not write manifest: {e:#}");
        return ExitCode::from(1);
    }
    println!("verdict={}", verdict.name());
    ExitCode::from(verdict.exit_code() as u8)
}
