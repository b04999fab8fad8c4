mod commands;
mod config;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{pick, FileConfig};

#[derive(Debug, Parser)]
#[command(
    name = "ged-forge",
    version,
    about = "Clean learner sentence-pair corpora and build GED datasets"
)]
struct Cli {
    /// Flat key/value config file; keys mirror the long flag names.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for the cleaning stages.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[arg(long, global = true, value_enum)]
    log: Option<LogFormat>,

    /// Increase log verbosity (-v debug, -vv trace).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LogFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the eight cleaning stages over a pair corpus.
    Clean(CleanArgs),
    /// Build the labeled train/validation split from a cleaned corpus.
    Split(SplitArgs),
    /// Compose a training batch from cleaned and discarded pools.
    Mix(MixArgs),
    /// Score a prediction file.
    Score(ScoreArgs),
    /// Summarise lengths and edit distances of a pair corpus.
    Stats(StatsArgs),
    /// Generate a synthetic pair corpus and its expected stage report.
    Synth(SynthArgs),
    /// Turn a pair (or discarded-pair) file into a labeled pool.
    Label(LabelArgs),
}

#[derive(Debug, Args)]
struct CleanArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output_cleaned: PathBuf,
    #[arg(long)]
    output_discarded: PathBuf,
    #[arg(long)]
    report: PathBuf,
    /// tsv or jsonl; guessed from the extension when absent.
    #[arg(long)]
    input_format: Option<String>,
    #[arg(long)]
    lev_min: Option<usize>,
    #[arg(long)]
    lev_max: Option<usize>,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    norm_min: Option<f64>,
    #[arg(long)]
    norm_max: Option<f64>,
    /// Contraction table (`key<TAB>expansion` per line); the bundled table by default.
    #[arg(long)]
    contractions: Option<PathBuf>,
    /// Keep at most this many cleaned pairs.
    #[arg(long)]
    sample: Option<usize>,
    /// head or random
    #[arg(long)]
    sample_mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    train_per_class: Option<usize>,
    #[arg(long)]
    val_rows: Option<usize>,
    #[arg(long)]
    out_train: PathBuf,
    #[arg(long)]
    out_val: PathBuf,
}

#[derive(Debug, Args)]
struct MixArgs {
    #[arg(long)]
    cleaned: PathBuf,
    #[arg(long)]
    discarded: PathBuf,
    #[arg(long)]
    cleaned_count: Option<usize>,
    #[arg(long)]
    discarded_count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    predictions: PathBuf,
    /// positive, macro or both
    #[arg(long)]
    mode: Option<String>,
    /// table, json or csv
    #[arg(long)]
    format: Option<String>,
    /// Row label in table output.
    #[arg(long, default_value = "model")]
    name: String,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    input_format: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    /// json or table
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    rows: Option<usize>,
    /// Flat key/value file of category proportions; uniform when absent.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    expected: PathBuf,
}

#[derive(Debug, Args)]
struct LabelArgs {
    #[arg(long)]
    input: PathBuf,
    /// Input carries a third stage_id column.
    #[arg(long)]
    discarded: bool,
    #[arg(long)]
    out: PathBuf,
}

fn init_logging(format: LogFormat, verbose: u8) {
    let level = match verbose {
        0 => tracing::Level::INFO,
        1 => tracing::Level::DEBUG,
        _ => tracing::Level::TRACE,
    };
    let builder = tracing_subscriber::fmt()
        .with_max_level(level)
        .with_writer(std::io::stderr)
        .with_target(false)
        .with_ansi(std::io::stderr().is_terminal());
    match format {
        LogFormat::Json => builder.json().init(),
        LogFormat::Text => builder.init(),
    }
}

fn resolve_log(cli_log: Option<LogFormat>, file: &FileConfig) -> anyhow::Result<LogFormat> {
    let from_file = match file.log.as_deref() {
        None => None,
        Some(s) => {
            Some(LogFormat::from_str(s, true).map_err(|e| anyhow::anyhow!("config log: {e}"))?)
        }
    };
    Ok(pick(cli_log, from_file, LogFormat::Text))
}

fn report_error(format: LogFormat, err: &anyhow::Error) {
    let message = format!("{err:#}");
    match format {
        LogFormat::Json => eprintln!(
            "{}",
            serde_json::json!({ "level": "error", "error": message })
        ),
        LogFormat::Text => eprintln!("error: {message}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let file = match cli.config.as_deref().map(FileConfig::load).transpose() {
        Ok(file) => file.unwrap_or_default(),
        Err(e) => {
            report_error(cli.log.unwrap_or(LogFormat::Text), &e);
            return ExitCode::FAILURE;
        }
    };
    let log = match resolve_log(cli.log, &file) {
        Ok(log) => log,
        Err(e) => {
            report_error(LogFormat::Text, &e);
            return ExitCode::FAILURE;
        }
    };
    init_logging(log, cli.verbose);
    let workers = pick(cli.workers, file.workers, 1).max(1);

    let result = match cli.command {
        Command::Clean(args) => commands::clean(args, &file, workers),
        Command::Split(args) => commands::split(args, &file),
        Command::Mix(args) => commands::mix(args, &file),
        Command::Score(args) => commands::score(args, &file),
        Command::Stats(args) => commands::stats(args, &file),
        Command::Synth(args) => commands::synth(args, &file),
        Command::Label(args) => commands::label(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(log, &e);
            ExitCode::FAILURE
        }
    }
}
