use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use orlicz_fio::bench::commands::{self, Artifacts};
use orlicz_fio::bench::{verify, ExperimentConfig, ExperimentKind};
use orlicz_fio::{Error, Result};

#[derive(Parser)]
#[command(name = "orlicz-fio", version, about = "Orlicz modulation norms, FIO kernels and Schatten norms on lattices")]
struct Cli {
    /// JSON config for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Refined grid size for `verify` (default 2n).
    #[arg(long, global = true)]
    refine: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Luxemburg or modulation norm of a stored field.
    Norm,
    /// Young function and its numerical conjugate.
    Conjugate,
    /// STFT of a stored field.
    Stft,
    /// Fourier integral operators.
    Fio {
        #[command(subcommand)]
        what: FioCmd,
    },
    /// Orlicz Schatten norm of a kernel operator.
    Schatten,
    /// Runs one verification experiment; exits with 2 when a flag is raised.
    Verify { experiment: String },
}

#[derive(Subcommand)]
enum FioCmd {
    Apply,
    Kernel,
}

fn load<T: DeserializeOwned>(path: &Option<PathBuf>) -> Result<T> {
    let Some(p) = path else {
        return Err(Error::InvalidParameter("this subcommand needs --config".into()));
    };
    Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?)
}

fn write(a: Artifacts, out: &Path) -> Result<ExitCode> {
    a.write(out)?;
    println!("{}", serde_json::to_string_pretty(&a.report)?);
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let seed = cli.seed.unwrap_or(42);
    match cli.cmd {
        Cmd::Norm => write(commands::norm(&load(&cli.config)?)?, &cli.out),
        Cmd::Conjugate => write(commands::conjugate(&load(&cli.config)?)?, &cli.out),
        Cmd::Stft => write(commands::stft(&load(&cli.config)?)?, &cli.out),
        Cmd::Fio { what: FioCmd::Apply } => write(commands::fio_apply(&load(&cli.config)?, seed)?, &cli.out),
        Cmd::Fio { what: FioCmd::Kernel } => write(commands::fio_kernel(&load(&cli.config)?, seed)?, &cli.out),
        Cmd::Schatten => write(commands::schatten(&load(&cli.config)?, seed)?, &cli.out),
        Cmd::Verify { experiment } => {
            let kind = ExperimentKind::parse(&experiment)?;
            let mut cfg = match &cli.config {
                Some(p) => ExperimentConfig::load(p)?,
                None => ExperimentConfig::default_for(kind),
            };
            if cfg.experiment != kind {
                return Err(Error::InvalidParameter(format!(
                    "config is for {}, not {}",
                    cfg.experiment.name(),
                    kind.name()
                )));
            }
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(r) = cli.refine {
                cfg.refine_n = Some(r);
            }
            let out = cfg.out.clone().unwrap_or(cli.out);
            let rep = verify(&cfg)?;
            rep.write(&out)?;
            for s in &rep.series {
                println!(
                    "{} {}: max ratio {:.4e} (n={}) -> {:.4e} (n={}), growth {:.3}",
                    rep.experiment, s.name, s.base.max, s.base.n, s.refined.max, s.refined.n, s.growth
                );
            }
            println!("flags: {}", serde_json::to_string(&rep.flags)?);
            Ok(if rep.flags.instability { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    // exit code 2 is reserved for raised flags
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
