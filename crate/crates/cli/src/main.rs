mod commands;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gnd_core::io::RunReport;
use gnd_core::{Error, ErrorClass, MonomialOrder};
use sha2::{Digest, Sha256};

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

/// Explicit desingularization and series computations over exact fields.
#[derive(Debug, Parser)]
#[command(name = "gnd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Problem file (or certificate for `verify`); stdin when absent.
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Where to write the artifact; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Monomial order, overriding `[options] order`.
    #[arg(long, global = true, value_enum)]
    order: Option<OrderArg>,

    /// Series precision: truncation for inputs, target for `lift`.
    #[arg(long, global = true, value_name = "N")]
    precision: Option<u32>,

    /// Number of generator subsets the smoothness search may try.
    #[arg(long, global = true, value_name = "N")]
    subset_budget: Option<usize>,

    /// Re-verify the emitted certificate after `gnd`.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Lex,
    Degrevlex,
}

impl From<OrderArg> for MonomialOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Lex => MonomialOrder::Lex,
            OrderArg::Degrevlex => MonomialOrder::DegRevLex,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
enum Command {
    /// Reduced Gröbner basis of `[ideal]`.
    Groebner,
    /// The ideal quotient `[ideal] : [divisor]`.
    Quotient,
    /// Gröbner basis of the ideal defining the smooth locus.
    SmoothLocus,
    /// Desingularization certificate for `[ideal]` and `[morphism]`.
    Gnd,
    /// Newton lifting of `[morphism]` as a solution of `[ideal]`.
    Lift,
    /// Weierstrass preparation of each `[series]` in its last variable.
    Weierstrass,
    /// Factor `[solution]` of `[matrix] y = [rhs]` through polynomial data.
    LinearFactor,
    /// Equation system for an isomorphism between the cokernels of `[u]` and `[v]`.
    ModuleIso,
    /// Re-check a certificate.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Groebner => "groebner",
            Command::Quotient => "quotient",
            Command::SmoothLocus => "smooth-locus",
            Command::Gnd => "gnd",
            Command::Lift => "lift",
            Command::Weierstrass => "weierstrass",
            Command::LinearFactor => "linear-factor",
            Command::ModuleIso => "module-iso",
            Command::Verify => "verify",
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Parse => EXIT_PARSE,
        ErrorClass::Precondition => EXIT_PRECONDITION,
        ErrorClass::Resource => EXIT_RESOURCE,
        ErrorClass::Internal => EXIT_INTERNAL,
    }
}

fn read_input(path: Option<&PathBuf>) -> io::Result<Vec<u8>> {
    match path {
        Some(p) => fs::read(p),
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn run(cli: &Cli) -> Result<RunReport, (u8, String)> {
    let start = Instant::now();
    let bytes = read_input(cli.input.as_ref()).map_err(|e| (EXIT_PRECONDITION, format!("cannot read input: {e}")))?;
    let digest = format!("{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| (EXIT_PARSE, "input is not valid UTF-8".to_string()))?;
    let out = commands::dispatch(cli.command, &text, &cli.into()).map_err(|e| (exit_code(&e), e.to_string()))?;

    let output = match &cli.output {
        Some(p) => {
            fs::write(p, &out.artifact)
                .map_err(|e| (EXIT_PRECONDITION, format!("cannot write {}: {e}", p.display())))?;
            p.display().to_string()
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(out.artifact.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| (EXIT_PRECONDITION, format!("cannot write output: {e}")))?;
            "inline".to_string()
        }
    };
    Ok(RunReport {
        subcommand: cli.command.name().to_string(),
        input_digest: digest,
        output,
        checks: out.checks,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_PARSE),
            };
        }
    };
    match run(&cli) {
        Ok(report) => {
            eprint!("{report}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                eprintln!("error: failed checks: {}", failed.join(", "));
                ExitCode::from(EXIT_INTERNAL)
            }
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_follow_the_subcommand() {
        let cli = Cli::try_parse_from(["gnd", "gnd", "--order", "lex", "--precision", "12", "--verify"]).unwrap();
        assert_eq!(cli.command, Command::Gnd);
        assert_eq!(cli.precision, Some(12));
        assert!(cli.verify && matches!(cli.order, Some(OrderArg::Lex)));
        assert!(Cli::try_parse_from(["gnd", "lift", "--order", "grevlex"]).is_err());
    }

    #[test]
    fn error_classes_map_to_codes() {
        assert_eq!(exit_code(&Error::UndeclaredVariable("Y".into())), EXIT_PARSE);
        assert_eq!(exit_code(&Error::NoWitness(String::new())), EXIT_PRECONDITION);
        assert_eq!(exit_code(&Error::Resource(String::new()).in_stage("search")), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::Internal(String::new())), EXIT_INTERNAL);
    }
}
