use clap::{Parser, ValueEnum};
use multijoint::config::{parse_config, RunConfig};
use multijoint::runner::{run_command, Command, Format, EXIT_ERROR};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliCommand {
    Detect,
    Factorize,
    Verify,
    Sweep,
    Certify,
    Oracle,
    Grassmann,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliFormat {
    Json,
    Csv,
}

/// Exact-arithmetic factorisation toolkit for multijoints of planes over
/// prime fields.
#[derive(Parser, Debug)]
#[command(name = "multijoint", version)]
struct Cli {
    #[arg(value_enum)]
    command: CliCommand,
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: std::path::PathBuf,
    /// Override the lambda list (repeatable, ascending).
    #[arg(long = "lambda")]
    lambdas: Vec<u32>,
    /// Override the search budget (profile evaluations).
    #[arg(long)]
    budget: Option<u64>,
    /// Override the generator seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: CliFormat,
    /// Override the brute-force oracle box radius.
    #[arg(long)]
    oracle_box: Option<i64>,
    /// Override the plane enumeration cap.
    #[arg(long)]
    plane_cap: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn apply_overrides(rc: &mut RunConfig, cli: &Cli) {
    if !cli.lambdas.is_empty() {
        rc.lambdas = cli.lambdas.clone();
        rc.lambdas.sort_unstable();
    }
    if let Some(b) = cli.budget {
        rc.budget = b;
    }
    if let Some(s) = cli.seed {
        rc.seed = s;
    }
    if let Some(b) = cli.oracle_box {
        rc.oracle_box = b;
    }
    if let Some(c) = cli.plane_cap {
        rc.plane_cap = c as u128;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let mut rc = match parse_config(&text) {
        Ok(rc) => rc,
        Err(violations) => {
            for v in violations {
                eprintln!("error: {v}");
            }
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    apply_overrides(&mut rc, &cli);

    let command = match cli.command {
        CliCommand::Detect => Command::Detect,
        CliCommand::Factorize => Command::Factorize,
        CliCommand::Verify => Command::Verify,
        CliCommand::Sweep => Command::Sweep,
        CliCommand::Certify => Command::Certify,
        CliCommand::Oracle => Command::Oracle,
        CliCommand::Grassmann => Command::Grassmann,
    };
    let format = match cli.format {
        CliFormat::Json => Format::Json,
        CliFormat::Csv => Format::Csv,
    };

    let run = || run_command(command, &rc, format);
    let result = match cli.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .expect("thread pool");
            pool.install(run)
        }
        None => run(),
    };
    match result {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
