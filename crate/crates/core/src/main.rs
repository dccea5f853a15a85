use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pcm::config::Config;
use pcm::experiment::{cmd_mnist, cmd_oracle, cmd_run, cmd_sweep, DataOrigin};
use pcm::Error;

#[derive(Debug, Parser)]
#[command(name = "pcm", version, about = "Progressive coordinate minimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One run of the configured algorithm; writes steps.csv and summary.txt.
    Run(Common),
    /// Regret over a geometric grid of horizons and several seeds.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated horizons, e.g. 4096,8192,16384.
        #[arg(long, value_delimiter = ',')]
        horizons: Option<Vec<u64>>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
    },
    /// PCM against coordinate descent on one-vs-rest hinge loss.
    Mnist(Common),
    /// Solves for the minimizer and writes minimizer.toml.
    Oracle(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML config; omitted sections take their defaults.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: output.dir from the config).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Keep a uniform subset of this many records.
    #[arg(long)]
    limit: Option<usize>,
    /// Positive class for one-vs-rest labels.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=9))]
    digit: Option<u8>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[arg(long)]
    horizon: Option<u64>,
}

impl Common {
    fn config(&self) -> Result<(Config, PathBuf), Error> {
        let mut config = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(l) = self.limit {
            config.data.limit = Some(l);
        }
        if let Some(d) = self.digit {
            config.data.digit = d;
        }
        if let Some(w) = self.workers {
            config.algorithm.workers = w as usize;
        }
        if let Some(h) = self.horizon {
            config.algorithm.horizon = h;
        }
        let out = self.out_dir.clone().unwrap_or_else(|| config.output.dir.clone());
        Ok((config, out))
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(common) => {
            let (config, out) = common.config()?;
            config.validate()?;
            let s = cmd_run(&config, &out)?;
            println!(
                "iterations {}  switches {}  final excess {:e}  cumulative regret {}",
                s.iterations, s.switches, s.final_excess, s.cumulative_regret
            );
        }
        Command::Sweep { common, horizons, seeds } => {
            let (mut config, out) = common.config()?;
            if let Some(h) = horizons {
                config.sweep.horizons = h;
            }
            if let Some(s) = seeds {
                config.sweep.seeds = s;
            }
            config.validate()?;
            let report = cmd_sweep(&config, &out)?;
            for ((h, r), k) in config.sweep.horizons.iter().zip(&report.mean_regret).zip(&report.mean_iterations) {
                println!("T = {h:>10}  mean regret {r:>14.6}  mean K {k:>10.1}");
            }
            println!(
                "fit R = {:.4} + {:.4} ln T (r^2 {:.4}), power exponent {:.4}",
                report.fit.intercept, report.fit.slope, report.fit.r_squared, report.fit.power_exponent
            );
        }
        Command::Mnist(common) => {
            let (config, out) = common.config()?;
            config.validate()?;
            let r = cmd_mnist(&config, &out)?;
            if r.origin == DataOrigin::Synthetic {
                eprintln!("MNIST files not found; using synthetic separable data");
            }
            println!("{} records, dimension {}", r.records, r.dim);
            for (name, s) in [("pcm", &r.pcm), ("scd", &r.scd)] {
                println!(
                    "{name}: final excess {:e}  cumulative regret {}  iterations {}",
                    s.final_excess, s.cumulative_regret, s.iterations
                );
            }
        }
        Command::Oracle(common) => {
            let (config, out) = common.config()?;
            config.validate()?;
            let sol = cmd_oracle(&config, &out)?;
            println!(
                "f* = {}  optimality {:e}  after {} iterations",
                sol.f_star, sol.optimality, sol.iterations
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidArgument(_) | Error::Schedule { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
