use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use epc_cli::commands::{self, Scale, Suite};
use epc_cli::config::ScenarioConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "epc",
    about = "Entangled polynomial codes: straggler-resilient, secure, private, \
             and batch distributed matrix multiplication over prime fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print recovery thresholds and cubic baselines for a construction grid,
    /// plus the subcubic crossover point.
    Thresholds {
        /// Largest Strassen tensor power to tabulate.
        #[arg(long, default_value_t = 3)]
        strassen_pow_max: u32,
        /// Collusion bounds for the secure rows.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        t: Vec<usize>,
        /// Batch sizes.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        l: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run one scenario config end to end and emit the run report.
    /// Exit code 0 iff the decode succeeded.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeat a scenario over worker counts and straggler counts; emits a
    /// CSV (or JSON) table of decode times.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker counts to sweep over (defaults to the config's count).
        #[arg(long, value_delimiter = ',')]
        workers: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        stragglers: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a verification suite; prints one pass/fail line per item.
    /// Exit code 0 iff every item passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, value_enum, default_value_t = Scale::Standard)]
        scale: Scale,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Matrix file utilities (text and binary formats).
    Matrix {
        #[command(subcommand)]
        action: MatrixAction,
    },
}

#[derive(Subcommand)]
enum MatrixAction {
    /// Write a seeded random matrix.
    Gen {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = epc_core::field::MERSENNE61)]
        modulus: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        binary: bool,
    },
    /// Convert between the text and binary formats (input autodetected).
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        binary: bool,
    },
}

fn init_thread_pool() {
    if let Ok(threads) = std::env::var("EPC_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Thresholds { strassen_pow_max, t, l, out, format } => {
            let table = commands::threshold_table(strassen_pow_max, &t, &l);
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&table)?,
                Format::Csv => commands::threshold_csv(&table),
            };
            commands::write_or_print(&text, out.as_ref())?;
            if out.is_some() {
                println!(
                    "crossover: k={} (2*7^k-1 = {} < {} = 8^k+2^k-1)",
                    table.crossover.k, table.crossover.coded, table.crossover.uncoded
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config, seed, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let seed = seed.unwrap_or(cfg.seed);
            let report = commands::run_scenario(&cfg, seed)?;
            let text = serde_json::to_string_pretty(&report)?;
            commands::write_or_print(&text, out.as_ref())?;
            Ok(if report.decoded_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Sweep { config, seed, workers, stragglers, trials, out, format } => {
            let cfg = ScenarioConfig::load(&config)?;
            let seed = seed.unwrap_or(cfg.seed);
            let counts = if workers.is_empty() { vec![cfg.workers] } else { workers };
            let rows = commands::sweep_scenario(&cfg, seed, &counts, &stragglers, trials)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&rows)?,
                Format::Csv => commands::sweep_csv(&rows),
            };
            commands::write_or_print(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, scale, seed, out, format } => {
            let report = commands::run_suite(suite, scale, seed)?;
            for item in &report.items {
                println!("[{}] {}", if item.pass { "PASS" } else { "FAIL" }, item.name);
            }
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report)?,
                Format::Csv => commands::suite_csv(&report),
            };
            if let Some(path) = &out {
                std::fs::write(path, &text)?;
            }
            println!(
                "{}: {} of {} items passed",
                report.suite,
                report.items.iter().filter(|i| i.pass).count(),
                report.items.len()
            );
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Matrix { action } => {
            match action {
                MatrixAction::Gen { rows, cols, modulus, seed, out, binary } => {
                    commands::matrix_gen(rows, cols, modulus, seed, &out, binary)?;
                }
                MatrixAction::Convert { input, output, binary } => {
                    commands::matrix_convert(&input, &output, binary)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
