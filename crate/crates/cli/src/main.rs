use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;

use qadic_core::Error;

#[derive(Parser, Serialize)]
#[command(name = "qadic", version, about = "Exact q-adic expansions, Cantor-set membership and exclusion certificates")]
struct Cli {
    #[command(subcommand)]
    #[serde(flatten)]
    command: Command,

    /// Write the output document to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Print the parsed run configuration as JSON and exit.
    #[arg(long, global = true)]
    #[serde(skip)]
    emit_config: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
enum Command {
    /// Preperiod and period of x in base q.
    Expand {
        #[arg(long)]
        x: String,
        #[arg(long)]
        q: u32,
    },
    /// Whether x lies in K(q, A).
    Member {
        #[arg(long)]
        x: String,
        #[arg(long)]
        q: u32,
        #[arg(long = "A")]
        #[serde(rename = "A")]
        digits: String,
    },
    /// Largest gap of K(q, A).
    Gap {
        #[arg(long)]
        q: u32,
        #[arg(long = "A")]
        #[serde(rename = "A")]
        digits: String,
    },
    /// Multiplicative order of a modulo m.
    Order {
        #[arg(long)]
        a: String,
        #[arg(long)]
        m: String,
    },
    /// Growth threshold of ord_{p^k}(q); several primes give the joint threshold.
    Stabilize {
        #[arg(long)]
        primes: String,
        #[arg(long)]
        q: String,
    },
    /// Orbits of the units modulo m under multiplication by q.
    Cosets {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: u64,
    },
    /// Exponent n with q^n ≡ 1 + b·t·∏p^k modulo t·∏p^(k+h).
    Witness {
        #[arg(long, default_value = "1")]
        t: String,
        #[arg(long)]
        primes: String,
        #[arg(long)]
        h: u64,
        /// Comma-separated exponents, one per prime.
        #[arg(long)]
        k: String,
        #[arg(long)]
        q: String,
    },
    /// Threshold k_alpha beyond which alpha/∏p^k misses K(q, A).
    Bound {
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long)]
        q: u32,
        #[arg(long = "A")]
        #[serde(rename = "A")]
        digits: String,
        #[arg(long)]
        primes: String,
        /// Also report the smallest threshold observed by direct search.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Non-membership certificate for alpha/∏p^k.
    Certify {
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long)]
        q: u32,
        #[arg(long = "A")]
        #[serde(rename = "A")]
        digits: String,
        #[arg(long)]
        primes: String,
        /// Comma-separated exponents, one per prime.
        #[arg(long)]
        k: String,
    },
    /// Check a certificate file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Scan alpha·ratio^k (k = 1..k-max) or alpha/∏p^k (k in [0, box]^l) for members of K(q, A).
    Enumerate {
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, conflicts_with = "primes")]
        ratio: Option<String>,
        #[arg(long)]
        primes: Option<String>,
        #[arg(long)]
        q: u32,
        #[arg(long = "A")]
        #[serde(rename = "A")]
        digits: String,
        #[arg(long = "k-max", conflicts_with = "side")]
        k_max: Option<u64>,
        #[arg(long = "box")]
        #[serde(rename = "box")]
        side: Option<u64>,
    },
    /// Points with terminating base-p expansion that lie in K(q, A).
    Dp {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: u32,
        #[arg(long = "A")]
        #[serde(rename = "A")]
        digits: String,
        #[arg(long = "exp-max")]
        exp_max: u64,
    },
    /// q^k/(q^(k+1) − 1) and its expansion.
    Euclid {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: u64,
    },
    /// Minimal (a, b) with p^a = q^b, if any.
    Deps {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
}

/// Failure of a run, mapped to the process exit code.
enum Failure {
    /// Bad input: exit code 2.
    Precondition(String),
    /// Defect or I/O failure: exit code 1.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precondition() {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Internal(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(format!("json: {e}"))
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("QADIC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Precondition(format!("QADIC_THREADS must be a nonnegative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    Ok(())
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut sink = open_output(&cli.out)?;
    if cli.emit_config {
        serde_json::to_writer(&mut sink, cli)?;
        writeln!(sink)?;
    } else {
        configure_threads()?;
        commands::execute(&cli.command, cli.format, &mut sink)?;
    }
    sink.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
