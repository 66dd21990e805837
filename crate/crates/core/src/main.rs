use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use serde_json::json;

use torsep::cone::{Guard, DEFAULT_MAX_N};
use torsep::io::{
    emit_report, exit_code, parse_instance, run_command, Command, Format, ModeArg, Options,
    PropertyArg, Report, DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS,
};
use torsep::Error;

/// Decide separation properties of toric orbit closures and print
/// certificates that re-verify by exact arithmetic.
#[derive(Parser, Debug)]
#[command(name = "torsep", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Input file; `-` or nothing reads standard input.
    input: Option<PathBuf>,

    /// Inline instance text instead of a file.
    #[arg(short = 'e', long = "expr", conflicts_with = "input")]
    expr: Option<String>,

    #[arg(long, value_enum, default_value = "both")]
    mode: ModeArg,

    #[arg(long, value_enum, default_value = "all")]
    property: PropertyArg,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Seed for the finite-field vanishing check.
    #[arg(long, env = "TORSEP_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,

    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,

    /// Largest n for the 2^n face and octant scans.
    #[arg(long = "max-n", default_value_t = DEFAULT_MAX_N)]
    max_n: usize,

    /// One JSON instance per input line; one compact JSON report per output
    /// line, in input order.
    #[arg(long)]
    batch: bool,

    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn read_input(cli: &Cli) -> Result<String, Error> {
    if let Some(e) = &cli.expr {
        return Ok(e.clone());
    }
    let mut text = String::new();
    match &cli.input {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::Input(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn run_one(cli: &Cli, opts: &Options, text: &str) -> Result<Report, Error> {
    let instance = parse_instance(text)?;
    run_command(cli.command, &instance, opts)
}

fn report_status(r: &Report) -> i32 {
    if r.disagreement() {
        4
    } else {
        0
    }
}

fn error_json(e: &Error, line: Option<usize>) -> serde_json::Value {
    json!({
        "schema": torsep::io::SCHEMA,
        "error": e.to_string(),
        "exit_code": exit_code(e),
        "line": line,
    })
}

fn batch(cli: &Cli, opts: &Options, text: &str) -> i32 {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let results: Vec<(String, i32)> = lines
        .par_iter()
        .map(|&(no, line)| match run_one(cli, opts, line) {
            Ok(r) => (
                serde_json::to_string(&r).expect("reports serialize"),
                report_status(&r),
            ),
            Err(e) => (error_json(&e, Some(no + 1)).to_string(), exit_code(&e)),
        })
        .collect();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (line, _) in &results {
        let _ = writeln!(out, "{line}");
    }
    results.iter().map(|(_, c)| *c).max().unwrap_or(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        mode: cli.mode,
        property: cli.property,
        seed: cli.seed,
        prime: cli.prime,
        trials: cli.trials,
        guard: Guard::new(cli.max_n),
        timing: cli.timing,
    };
    let text = match read_input(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("torsep: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    let code = if cli.batch {
        batch(&cli, &opts, &text)
    } else {
        match run_one(&cli, &opts, &text) {
            Ok(r) => {
                print!("{}", emit_report(&r, cli.format));
                if cli.format == Format::Json {
                    println!();
                }
                report_status(&r)
            }
            Err(e) => {
                match cli.format {
                    Format::Json => println!("{}", error_json(&e, None)),
                    Format::Text => eprintln!("torsep: {e}"),
                }
                exit_code(&e)
            }
        }
    };
    let _ = io::stdout().lock().flush();
    ExitCode::from(code as u8)
}
