use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use beamsign_cli::commands::{self, GreensArgs, GreensMethod, SweepArgs};
use beamsign_cli::config::ProblemFile;
use beamsign_cli::{CliError, CliResult};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "beamsign", version, about = "Sign and uniqueness analysis for u'''' - p u'' + c(t) u = h(t)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FileArgs {
    /// Problem file (`key = value` lines)
    file: PathBuf,
    /// Print the canonical problem file and exit
    #[arg(long)]
    dump_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print lambda1, lambda1', lambda2, lambda3 and delta1
    Spectrum {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
    },
    /// Evaluate every sufficient condition and report the verdict
    Check(FileArgs),
    /// Solve and write t,u,du,d2u as CSV
    Solve {
        #[command(flatten)]
        input: FileArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve, certify the sign and compare with the verdict
    Verify(FileArgs),
    /// Write the Green's function for a constant coefficient as t,s,g CSV
    Greens {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = GreensMethod::Series)]
        method: GreensMethod,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a range of constant coefficients
    Sweep {
        #[command(flatten)]
        input: FileArgs,
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(input: &FileArgs, out: &mut dyn Write) -> CliResult<Option<ProblemFile>> {
    let file = ProblemFile::load(&input.file)?;
    if input.dump_config {
        commands::dump_config(out, &file)?;
        return Ok(None);
    }
    Ok(Some(file))
}

fn need_out(out: Option<PathBuf>) -> CliResult<PathBuf> {
    out.ok_or_else(|| CliError::input("missing_argument", "--out is required"))
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Spectrum { p, a, b } => commands::spectrum(out, p, a, b),
        Command::Check(input) => match load(&input, out)? {
            Some(file) => commands::check(out, &file),
            None => Ok(()),
        },
        Command::Solve { input, out: path } => match load(&input, out)? {
            Some(file) => commands::solve(out, &file, &need_out(path)?),
            None => Ok(()),
        },
        Command::Verify(input) => match load(&input, out)? {
            Some(file) => commands::verify(out, &file),
            None => Ok(()),
        },
        Command::Greens { p, m, a, b, n, terms, method, out: path } => {
            let args = GreensArgs { p, m, a, b, n, terms, method };
            commands::greens(out, &args, &path)
        }
        Command::Sweep { input, param, from, to, steps, out: path } => match load(&input, out)? {
            Some(file) => {
                let args = SweepArgs { param, from, to, steps };
                commands::sweep(out, &file, &args, &need_out(path)?)
            }
            None => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprintln!("{}", CliError::input("usage", first).report_line());
            return ExitCode::from(1);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("{}", e.report_line());
            ExitCode::from(e.exit_code())
        }
    }
}
