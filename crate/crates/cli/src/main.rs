use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use orientcalc::report::Report;
use orientcalc::suite::{paper_suite, SuiteConfig};
use orientcalc_cli::emit::{emit, Format};
use orientcalc_cli::{parse, run, RunOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

/// Verify identities of oriented cohomology theories as exact polynomial
/// identities up to a degree cap.
#[derive(Debug, Parser)]
#[command(name = "orientcalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Run a built-in identity suite.
    #[arg(long, value_enum)]
    suite: Option<SuiteName>,

    /// Default degree cap.
    #[arg(long, global = true, env = "FGL_CHERN_CAP", default_value_t = orientcalc::DEFAULT_CAP,
          value_parser = clap::value_parser!(u32).range(1..))]
    cap: u32,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Number of checks evaluated concurrently.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    /// Seed for randomly generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Report zero elapsed time, for byte-stable output.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and evaluate a script.
    Verify { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let jobs = cli.jobs.map(|j| j as usize);
    let mut reports: Vec<Report> = match (&cli.command, cli.suite) {
        (Some(Command::Verify { file }), None) => {
            let src = match std::fs::read_to_string(file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let script = match parse(&src) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}:{e}", file.display());
                    return ExitCode::from(2);
                }
            };
            run(&script, &RunOptions { cap: cli.cap, jobs })
        }
        (None, Some(SuiteName::Paper)) => match paper_suite(&SuiteConfig { cap: cli.cap, seed: cli.seed, jobs }) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("suite setup failed: {e}");
                return ExitCode::from(1);
            }
        },
        _ => {
            eprintln!("error: give exactly one of `verify <file>` or `--suite paper`");
            return ExitCode::from(2);
        }
    };
    if cli.no_timing {
        reports.iter_mut().for_each(|r| r.elapsed_ms = 0);
    }
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    print!("{}", emit(&reports, format, cli.cap));
    if reports.iter().any(Report::failed) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
