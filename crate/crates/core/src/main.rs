use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polycoh::cli::{self, CliError};
use polycoh::expr::Mode;
use polycoh::verify;

/// Exact computations in the integer cohomology ring of polygon spaces.
#[derive(Parser)]
#[command(name = "polycoh", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Nice,
    Perfect,
    Hkn,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Nice => Mode::Nice,
            ModeArg::Perfect => Mode::Perfect,
            ModeArg::Hkn => Mode::Hkn,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression such as "(1 2 3)*(1 2 4)".
    Multiply {
        #[arg(long)]
        lengths: String,
        #[arg(long, value_enum, default_value = "nice")]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
        expression: String,
    },
    /// Run every identity check and the randomized suites.
    Verify {
        #[arg(long)]
        lengths: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases per randomized suite.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Betti numbers b_0..b_{n-3}.
    Betti {
        #[arg(long)]
        lengths: String,
        #[arg(long)]
        json: bool,
    },
    /// Graded monomial basis of the quotient ring.
    Basis {
        #[arg(long)]
        lengths: String,
        #[arg(long)]
        json: bool,
    },
    /// Scan integer length vectors for chambers.
    Chambers {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        bound: u64,
        #[arg(long)]
        json: bool,
    },
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Multiply {
            lengths,
            mode,
            json,
            expression,
        } => cli::multiply(out, &lengths, mode.into(), &expression, json),
        Command::Verify {
            lengths,
            seed,
            samples,
        } => cli::verify(out, &lengths, verify::Options { seed, samples }),
        Command::Betti { lengths, json } => cli::betti(out, &lengths, json),
        Command::Basis { lengths, json } => cli::basis(out, &lengths, json),
        Command::Chambers { n, bound, json } => cli::chambers(out, n, bound, json),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(args.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
