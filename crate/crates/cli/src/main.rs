use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qgraph_cli::bench::{parse_workloads, run_bench, to_csv};
use qgraph_cli::{run_files, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "qgraph", version, about = "Graph states on a stabilizer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an operation script against a graph and print the report.
    Run {
        #[arg(long)]
        graph: PathBuf,
        /// Omit to report the prepared graph unchanged.
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Maximum copies one readout may consume.
        #[arg(long)]
        copy_limit: Option<usize>,
    },
    /// Write gate and copy counts as CSV.
    Bench {
        /// A workload name, a comma-separated list, or `all`.
        #[arg(long, default_value = "all")]
        workload: String,
        /// Comma-separated register sizes.
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Run {
            graph,
            script,
            seed,
            trials,
            format,
            copy_limit,
        } => run_files(
            &graph,
            script.as_deref(),
            RunOptions {
                seed,
                trials,
                copy_limit,
            },
        )
        .map(|report| {
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            print!("{text}");
        }),
        Cmd::Bench {
            workload,
            n,
            trials,
            out,
            seed,
        } => parse_workloads(&workload)
            .map_err(CliError::Io)
            .and_then(|w| run_bench(&w, &n, trials, seed).map_err(CliError::Io))
            .and_then(|rows| {
                fs::write(&out, to_csv(&rows)).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))
            }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
