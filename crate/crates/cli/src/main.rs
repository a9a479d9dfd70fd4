mod config;
mod figures;
mod pricing;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

use hpm_core::validation::{corrupted_phi2, Profile, Validator};

use config::{ContractKind, ExperimentConfig, Method, Settings};
use table::Table;

/// European put prices from closed forms and homotopy-perturbation series.
#[derive(Debug, Parser)]
#[command(name = "hpm", version)]
struct Cli {
    /// JSON file with experiment settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Price one contract.
    Price {
        #[arg(value_enum)]
        contract: Option<ContractKind>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Write the data behind figure 1..=6 as CSV.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
        id: u8,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add a generation timestamp to the metadata (output is then no longer byte-stable).
        #[arg(long)]
        timestamp: bool,
        #[command(flatten)]
        settings: Settings,
    },
    /// Sweep a contract over spot prices and compare with the exact value.
    Grid {
        #[arg(value_enum)]
        contract: Option<ContractKind>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timestamp: bool,
        #[command(flatten)]
        settings: Settings,
    },
    /// Run the acceptance checks and print a table.
    Validate {
        #[arg(long, value_enum, default_value = "default")]
        profile: ProfileArg,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Default,
    Strict,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fault {
    /// Scale the second series correction by 1.001.
    Phi2,
}

enum Failure {
    Validation,
    Input(anyhow::Error),
    Io(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(path) => Settings::from_json_file(path).map_err(|e| {
            if e.root_cause().is::<io::Error>() {
                Failure::Io(e)
            } else {
                Failure::Input(e)
            }
        })?,
        None => Settings::default(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Input(anyhow::anyhow!("--threads must be at least 1")));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::Input(e.into()))?;

    match cli.command {
        Command::Price { contract, settings } => {
            let cfg = resolve(contract, settings, file)?;
            cfg.validate_contract()?;
            price(&cfg)
        }
        Command::Figure { id, out, timestamp, settings } => {
            let cfg = resolve(None, settings, file)?;
            let mut t = pool.install(|| figures::figure(id, &cfg))?;
            emit(&mut t, out.as_deref(), timestamp)
        }
        Command::Grid { contract, out, timestamp, settings } => {
            let cfg = resolve(contract, settings, file)?;
            let mut t = pool.install(|| figures::grid(&cfg))?;
            emit(&mut t, out.as_deref(), timestamp)
        }
        Command::Validate { profile, inject_fault } => {
            let profile = match profile {
                ProfileArg::Default => Profile::Default,
                ProfileArg::Strict => Profile::Strict,
            };
            let mut v = Validator::new(profile);
            if let Some(Fault::Phi2) = inject_fault {
                v = v.with_generalized_terms(corrupted_phi2);
            }
            let report = v.run_all();
            print!("{}", report.render_table());
            let failed: Vec<_> = report.failures().collect();
            if failed.is_empty() {
                println!("all checks passed");
                Ok(())
            } else {
                println!("{} check(s) failed:", failed.len());
                for c in failed {
                    println!("  {} {}", c.id, c.name);
                }
                Err(Failure::Validation)
            }
        }
    }
}

fn resolve(contract: Option<ContractKind>, flags: Settings, file: Settings) -> anyhow::Result<ExperimentConfig> {
    let flags = Settings { contract: contract.or(flags.contract), ..flags };
    ExperimentConfig::resolve(flags.over(file))
}

fn price(cfg: &ExperimentConfig) -> Result<(), Failure> {
    let value = pricing::configured(cfg, cfg.method)?;
    let mut out = String::new();
    for (k, v) in cfg.parameters() {
        out.push_str(&format!("{k:<15}{v}\n"));
    }
    out.push_str(&format!("{:<15}{value:.11e}\n", "price"));
    if cfg.method != Method::Exact {
        let exact = pricing::configured(cfg, Method::Exact)?;
        out.push_str(&format!("{:<15}{exact:.11e}\n", "exact"));
        out.push_str(&format!("{:<15}{:.11e}\n", "deviation", value - exact));
    }
    io::stdout()
        .write_all(out.as_bytes())
        .map_err(|e| Failure::Io(e.into()))
}

fn emit(t: &mut Table, out: Option<&Path>, timestamp: bool) -> Result<(), Failure> {
    if timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        t.meta("generated_unix_time", secs.to_string());
    }
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Io(anyhow::Error::new(e).context(format!("creating {}", path.display()))))?;
            t.write_csv(BufWriter::new(file))
                .map_err(|e| Failure::Io(anyhow::Error::new(e).context(format!("writing {}", path.display()))))
        }
        None => t.write_csv(io::stdout().lock()).map_err(|e| Failure::Io(e.into())),
    }
}
