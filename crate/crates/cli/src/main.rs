use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hostile_pac::harness::records::{to_pretty_json, OutputDir};
use hostile_pac::harness::{self, bound, ExperimentConfig, SweepAxis};
use hostile_pac::{selftest, Dataset, Error, Result};

#[derive(Parser)]
#[command(name = "hostile-pac", version, about = "PAC-Bayesian bounds and aggregation under heavy tails and dependence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds for ρ̂ₙ, π_γ, the ERM Dirac mass and the prior on one dataset.
    Bound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        data: DataArgs,
    },
    /// The aggregation distribution ρ̂ₙ and its atoms.
    Aggregate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Monte Carlo coverage over replicated datasets.
    Coverage {
        #[command(flatten)]
        common: Common,
    },
    /// Coverage summaries along one parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary: n, delta or p.
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Closed-form example suite.
    Selftest {
        /// Accepted for uniformity; the examples do not read it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for summary.json and per-run files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DataArgs {
    /// Comma-separated dataset (y,x₁,…,x_d per line) used instead of the generator.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Writes the dataset that was used.
    #[arg(long)]
    export_data: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }
}

impl DataArgs {
    fn dataset(&self, cfg: &ExperimentConfig) -> Result<Dataset> {
        let data = match &self.data {
            Some(path) => {
                let file = File::open(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Dataset::read_delimited(BufReader::new(file))?
            }
            None => bound::primary_dataset(cfg)?,
        };
        if let Some(path) = &self.export_data {
            let mut w = BufWriter::new(File::create(path)?);
            data.write_delimited(&mut w)?;
            w.flush()?;
        }
        Ok(data)
    }
}

fn emit<T: serde::Serialize>(out: Option<&Path>, summary: &T) -> Result<()> {
    match out {
        Some(dir) => {
            OutputDir::create(dir)?.summary(summary)?;
        }
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{}", to_pretty_json(summary)?)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Bound { common, data } => {
            let cfg = common.load()?;
            let setup = cfg.setup()?;
            let run = bound::run_bound_on(&setup, &data.dataset(&cfg)?)?;
            emit(common.out.as_deref(), &run)?;
        }
        Command::Aggregate { common, data } => {
            let cfg = common.load()?;
            let setup = cfg.setup()?;
            let agg = bound::run_aggregate_on(&setup, &data.dataset(&cfg)?)?;
            emit(common.out.as_deref(), &agg)?;
        }
        Command::Coverage { common } => {
            let report = harness::run_coverage(&common.load()?)?;
            if let Some(dir) = &common.out {
                OutputDir::create(dir)?.records(&report.records)?;
            }
            emit(common.out.as_deref(), &report)?;
        }
        Command::Sweep { common, axis, values } => {
            let table = harness::run_sweep(&common.load()?, axis, &values)?;
            if let Some(dir) = &common.out {
                let (_, mut w) = OutputDir::create(dir)?.file("sweep.csv")?;
                table.write_csv(&mut w)?;
                w.flush()?;
            }
            emit(common.out.as_deref(), &table)?;
        }
        Command::Selftest { config: _, out } => {
            let report = selftest::run()?;
            emit(out.as_deref(), &report)?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("selftest failed: {} = {} (expected {})", c.name, c.value, c.expected);
            }
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
