//! `sqrtwiener`: runs the verification suites and writes a JSON report plus
//! CSV (or JSON) tables into the output directory.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 for
//! usage, configuration or I/O errors.

mod config;
mod report;
mod suites;

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{
    Format, ItoParams, MapParams, PdeParams, PhaseParams, RegularizeParams, RunConfig, VariationParams, DEFAULT_SEED,
};
use report::{write_report, SuiteOutput};

#[derive(Parser, Debug)]
#[command(
    name = "sqrtwiener",
    version,
    about = "Numerical checks for the square root of a Wiener process"
)]
struct Cli {
    /// Master RNG seed
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for ensembles (defaults to the available cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[arg(long, global = true, env = "SQRTWIENER_OUTPUT_DIR", default_value = "sqrtwiener-out")]
    output_dir: PathBuf,
    /// Table format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symbolic and Monte Carlo verification
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Regularized |dW| sums and the sign(dW) integral
    Regularize(RegularizeParams),
    /// Crank-Nicolson evolution of a Gaussian packet
    Pde(PdeParams),
    /// Binomial discrete wavefunction
    Map(MapParams),
    /// Every suite with default parameters
    All,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Exact reduction of the square-root ansatz
    Ito(ItoParams),
    /// Moments of the Bernoulli phase
    Phase(PhaseParams),
    /// Power variations and the squared-increment residual
    Variation(VariationParams),
}

fn defaults<T: clap::Args>() -> T {
    #[derive(Parser)]
    struct Wrap<T: clap::Args> {
        #[command(flatten)]
        inner: T,
    }
    Wrap::<T>::parse_from(["defaults"]).inner
}

fn run(command: &Command, cfg: &RunConfig) -> anyhow::Result<(String, SuiteOutput)> {
    Ok(match command {
        Command::Verify { what: Verify::Ito(p) } => {
            p.validate()?;
            ("verify ito".into(), suites::ito::run(p, cfg)?)
        }
        Command::Verify { what: Verify::Phase(p) } => {
            p.validate()?;
            ("verify phase".into(), suites::phase::run(p, cfg)?)
        }
        Command::Verify {
            what: Verify::Variation(p),
        } => {
            p.validate()?;
            ("verify variation".into(), suites::variation::run(p, cfg)?)
        }
        Command::Regularize(p) => {
            p.validate()?;
            ("regularize".into(), suites::regularize::run(p, cfg)?)
        }
        Command::Pde(p) => {
            p.validate()?;
            ("pde".into(), suites::pde::run(p, cfg)?)
        }
        Command::Map(p) => {
            p.validate()?;
            ("map".into(), suites::map::run(p, cfg)?)
        }
        Command::All => {
            let mut out = SuiteOutput::default();
            out.extend("ito", suites::ito::run(&defaults(), cfg)?);
            out.extend("phase", suites::phase::run(&defaults(), cfg)?);
            out.extend("variation", suites::variation::run(&defaults(), cfg)?);
            out.extend("regularize", suites::regularize::run(&defaults(), cfg)?);
            out.extend("pde", suites::pde::run(&defaults(), cfg)?);
            out.extend("map", suites::map::run(&defaults(), cfg)?);
            ("all".into(), out)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli
        .workers
        .map(|w| w as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get));
    let cfg = RunConfig {
        seed: cli.seed,
        workers,
        output_dir: cli.output_dir,
        format: cli.format,
    };

    let start = Instant::now();
    let (name, output) = match run(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed().as_secs_f64();

    for c in &output.checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        println!(
            "{tag} {} observed={} expected={} tolerance={}",
            c.name, c.observed, c.expected, c.tolerance
        );
    }
    let path = match write_report(&name, &output, &cfg, elapsed) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let failed = output.checks.iter().filter(|c| !c.passed()).count();
    println!(
        "{} checks, {failed} failed, report {}",
        output.checks.len(),
        path.display()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
