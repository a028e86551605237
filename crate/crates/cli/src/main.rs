use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use chain_core::suite::{emit_report, exit_code, run_suite, Format, SuiteConfig, SUITES};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    JsonLines,
    Table,
}

/// Runs verification suites and prints one report per check.
#[derive(Debug, Parser)]
#[command(name = "chaincheck", version)]
struct Args {
    /// Suite to run (repeatable); all suites when omitted.
    #[arg(long = "suite", value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suites: Vec<String>,
    /// Primes p (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    r: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    m: Vec<u32>,
    /// Field order q for sampled checks.
    #[arg(long)]
    field: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ceiling on normal-form basis sizes.
    #[arg(long)]
    capacity: Option<u64>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
    /// Record runtime_ms in each report.
    #[arg(long)]
    timings: bool,
}

impl Args {
    fn config(&self) -> SuiteConfig {
        let d = SuiteConfig::default();
        let or = |v: &Vec<u32>, dv: Vec<u32>| if v.is_empty() { dv } else { v.clone() };
        SuiteConfig {
            suites: if self.suites.is_empty() {
                d.suites
            } else {
                self.suites.clone()
            },
            p: if self.p.is_empty() {
                d.p
            } else {
                self.p.clone()
            },
            n: or(&self.n, d.n),
            r: or(&self.r, d.r),
            m: or(&self.m, d.m),
            field: self.field,
            samples: self.samples.unwrap_or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            capacity: self.capacity.unwrap_or(d.capacity),
            timings: self.timings,
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let reports = match run_suite(&args.config()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("chaincheck: {e}");
            return ExitCode::from(2);
        }
    };
    let format = match args.format {
        OutputFormat::JsonLines => Format::JsonLines,
        OutputFormat::Table => Format::Table,
    };
    let written = match &args.out {
        Some(path) => File::create(path)
            .map_err(chain_core::error::Error::from)
            .and_then(|f| {
                let mut w = BufWriter::new(f);
                emit_report(&reports, format, &mut w)?;
                w.flush().map_err(Into::into)
            }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit_report(&reports, format, &mut lock)
        }
    };
    if let Err(e) = written {
        eprintln!("chaincheck: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(exit_code(&reports) as u8)
}
