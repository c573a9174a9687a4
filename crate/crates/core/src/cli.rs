//! Command-line entry point.
//!
//! Exit status: 0 success, 1 analysis failure (a `--gate` check failed or the
//! bit supply ran out), 2 usage or configuration error, 3 I/O or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::certify::{build_report, CertifyError};
use crate::config::{ConfigError, RunConfig};
use crate::consumer::{carmichael_harness, BitCursor, HarnessError, Verdict};
use crate::extract::{von_neumann_extract, ExtractionSummary};
use crate::formats::{self, FormatError};
use crate::protocol::{run_batch, run_batch_with_workers, ProtocolError};
use crate::report::{self, ExtractionReport, GenerationReport};
use crate::stats::{build_stats_report, StatsError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ksqrng", version, about = "Contextuality-certified qutrit QRNG simulator and toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate trials and write a trace file.
    Generate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Bypass every noise source.
        #[arg(long)]
        ideal: bool,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; output does not depend on this.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Certification report for a trace.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Exit 1 unless both outcomes satisfy the certification bounds.
        #[arg(long)]
        gate: bool,
    },
    /// Drop discards, debias, and write a bit file.
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Entropy, bucket frequencies and the SP 800-22 subset.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bucket: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Exit 1 if any applicable test fails at α = 0.01.
        #[arg(long)]
        gate: bool,
    },
    /// Solovay-Strassen over Carmichael numbers using bits from a bit file.
    ConsumeSs {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        witnesses: Option<u32>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Exit 1 if any Carmichael number is reported probably prime.
        #[arg(long)]
        gate: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("gate failed: {0}")]
    Gate(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_USAGE,
            CliError::Protocol(ProtocolError::Allocation { .. } | ProtocolError::WorkerPool(_)) => EXIT_IO,
            CliError::Protocol(_) => EXIT_USAGE,
            CliError::Format(_) => EXIT_IO,
            CliError::Certify(_) | CliError::Stats(_) | CliError::Harness(_) | CliError::Gate(_) => EXIT_ANALYSIS,
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand, and returns the
/// exit status. Diagnostics go to stderr; reports without `--report` go to
/// stdout.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|source| FormatError::Io { path: p.display().to_string(), source })?;
            Ok(RunConfig::parse(&text)?)
        }
    }
}

fn emit(report: Option<&Path>, text: &str) -> Result<(), CliError> {
    match report {
        Some(p) => formats::write_atomic(p, text.as_bytes())?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|source| FormatError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(())
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate { config, out, ideal, trials, seed, workers, report } => {
            let mut cfg = load_config(config.as_deref())?;
            cfg.ideal |= ideal;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.validate()?;
            let protocol = cfg.protocol();
            let (stream, summary) = match workers {
                Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
                Some(w) => run_batch_with_workers(&protocol, w)?,
                None => run_batch(&protocol)?,
            };
            formats::write_trace(&stream, &out)?;
            let r = GenerationReport { seed: cfg.seed, ideal: cfg.ideal, noise: protocol.noise, summary };
            emit(report.as_deref(), &report::generation(&r))
        }
        Command::Certify { input, report, gate } => {
            let stream = formats::read_trace(&input)?;
            let r = build_report(&stream)?;
            emit(report.as_deref(), &report::certification(&r))?;
            if gate && !r.all_certified() {
                return Err(CliError::Gate(format!(
                    "overlaps {:.6} / {:.6} outside [{:.6}, {:.6}]",
                    r.overlap_plus, r.overlap_minus, r.bound_lo, r.bound_hi
                )));
            }
            Ok(())
        }
        Command::Extract { input, out, report } => {
            let stream = formats::read_trace(&input)?;
            let binary = stream.binary_bits();
            let extracted = von_neumann_extract(&binary);
            formats::write_bits(&extracted, &out)?;
            let r = ExtractionReport {
                trace_counts: stream.counts(),
                extraction: ExtractionSummary::new(&binary, &extracted),
            };
            emit(report.as_deref(), &report::extraction(&r))
        }
        Command::Stats { input, bucket, config, report, gate } => {
            let cfg = load_config(config.as_deref())?;
            let bucket = bucket.unwrap_or(cfg.bucket_size);
            if bucket == 0 {
                return Err(CliError::Usage("--bucket must be at least 1".into()));
            }
            let bits = formats::read_bits(&input)?;
            let r = build_stats_report(&bits, bucket as usize)?;
            emit(report.as_deref(), &report::stats(&r))?;
            if gate && r.tests_failed() > 0 {
                return Err(CliError::Gate(format!("{} of {} tests failed", r.tests_failed(), r.tests.len())));
            }
            Ok(())
        }
        Command::ConsumeSs { input, limit, witnesses, config, report, gate } => {
            let cfg = load_config(config.as_deref())?;
            let limit = limit.unwrap_or(cfg.ss_limit);
            let witnesses = witnesses.unwrap_or(cfg.ss_witnesses);
            if limit < 3 {
                return Err(CliError::Usage("--limit must be at least 3".into()));
            }
            if witnesses == 0 {
                return Err(CliError::Usage("--witnesses must be at least 1".into()));
            }
            let bits = formats::read_bits(&input)?;
            let r = carmichael_harness(limit, &mut BitCursor::new(&bits), witnesses)?;
            emit(report.as_deref(), &report::consumer(&r))?;
            if gate {
                if let Some(v) = r.verdicts.iter().find(|v| v.verdict == Verdict::ProbablyPrime) {
                    return Err(CliError::Gate(format!("Carmichael number {} passed as probably prime", v.number)));
                }
            }
            Ok(())
        }
    }
}
