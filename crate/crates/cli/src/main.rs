use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod artifacts;
mod commands;
mod config;
mod summary;

use config::{ConfigError, PipelineConfig};

/// Batch pipeline for regional social-media sentiment analysis.
#[derive(Debug, Parser)]
#[command(name = "geosent", version)]
struct Cli {
    /// TOML configuration file; relative paths inside it are resolved
    /// against its directory.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Output directory for all artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides a config value, e.g. `--set thresholds.alpha=0.1`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load posts, keep located ones and resolve regions.
    Ingest,
    /// Clean resolved posts and select the emoji whitelist.
    Clean,
    /// Frequency report over the raw corpus.
    Report {
        #[arg(value_enum)]
        what: ReportKind,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Train the sentiment model on the labelled corpus.
    Train,
    /// Label cleaned posts with the trained model.
    Classify,
    /// Use `id,label` predictions from an external model instead.
    ImportPredictions {
        /// Defaults to `paths.predictions`.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Count sentiment per region before and after the event.
    Aggregate,
    /// Chi-squared and dummy-regression tests for a sentiment shift.
    ShiftTest,
    /// OLS of the regional outcome.
    Regress,
    /// AIC stepwise selection of the regional model.
    Stepwise,
    /// Run all stages and write a Markdown summary.
    Pipeline,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportKind {
    Hashtags,
    Emojis,
}

fn exit_code(err: &anyhow::Error) -> (u8, &'static str) {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return (1, "config");
        }
        if let Some(e) = cause.downcast_ref::<geosent::Error>() {
            return match e.kind() {
                geosent::ErrorKind::Config => (1, "config"),
                geosent::ErrorKind::Numerical => (3, "numerical"),
                geosent::ErrorKind::Data | geosent::ErrorKind::Io => (2, "data"),
            };
        }
    }
    (2, "data")
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = PipelineConfig::load(cli.config.as_deref(), &cli.overrides)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let ctx = commands::Context::new(cfg, &cli.out)?;
    match cli.command {
        Command::Ingest => ctx.ingest(),
        Command::Clean => ctx.clean(),
        Command::Report { what, top } => match what {
            ReportKind::Hashtags => ctx.report_hashtags(top),
            ReportKind::Emojis => ctx.report_emojis(top),
        },
        Command::Train => ctx.train(),
        Command::Classify => ctx.classify(),
        Command::ImportPredictions { file } => ctx.import_predictions(file.as_deref()),
        Command::Aggregate => ctx.aggregate(),
        Command::ShiftTest => ctx.shift_test(),
        Command::Regress => ctx.regress(),
        Command::Stepwise => ctx.stepwise(),
        Command::Pipeline => ctx.pipeline(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("error kind=usage code=1: {first}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, kind) = exit_code(&err);
            let reason = format!("{err:#}").replace('\n', " ");
            eprintln!("error kind={kind} code={code}: {reason}");
            ExitCode::from(code)
        }
    }
}
