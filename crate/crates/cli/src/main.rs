//! `kmtheta`: configuration checks, theta series, numerical verification and
//! error-function evaluation, all reported as JSON.
//!
//! Exit codes: 0 success, 2 incidence failure, 3 numeric tolerance failure,
//! 4 input error.

mod commands;
mod config;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commands::{Efun, Outcome};
use config::RunConfig;
use kmtheta::Error;

const EXIT_INCIDENCE: u8 = 2;
const EXIT_TOLERANCE: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "kmtheta", version, about = "Completed indefinite theta functions")]
struct Cli {
    /// JSON run configuration; `-` reads standard input.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the incidence conditions on the four C vectors.
    Validate,
    /// Holomorphic part or completed series on the selected cosets.
    Theta {
        #[arg(long, value_enum, default_value = "hol")]
        mode: Mode,
    },
    /// Run one numerical check against the configured tolerances.
    Verify {
        #[arg(value_enum)]
        which: Check,
    },
    /// Evaluate an error function.
    Efun {
        #[arg(value_enum)]
        function: EfunName,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Print the canonical configuration.
    Fixture,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Hol,
    Complete,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    #[value(name = "theorem-a")]
    SurfaceIdentity,
    Stokes,
    Modularity,
    Shadow,
    Intersection,
}

#[derive(Clone, Copy, ValueEnum)]
enum EfunName {
    E1,
    M1,
    E2,
    #[value(name = "tilde_e2")]
    TildeE2,
    #[value(name = "e2_flat")]
    E2Flat,
    #[value(name = "e2_boosted")]
    E2Boosted,
}

impl From<EfunName> for Efun {
    fn from(f: EfunName) -> Self {
        match f {
            EfunName::E1 => Efun::E1,
            EfunName::M1 => Efun::M1,
            EfunName::E2 => Efun::E2,
            EfunName::TildeE2 => Efun::TildeE2,
            EfunName::E2Flat => Efun::E2Flat,
            EfunName::E2Boosted => Efun::E2Boosted,
        }
    }
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Incidence(_) | Error::NotNegativePlane | Error::ComponentMismatch => EXIT_INCIDENCE,
            Error::Accuracy { .. } | Error::Truncation { .. } => EXIT_TOLERANCE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn read_config(path: Option<&PathBuf>) -> Result<Option<RunConfig>, Failure> {
    let Some(path) = path else { return Ok(None) };
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| input_error(format!("reading standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| input_error(format!("reading {}: {e}", path.display())))?;
    }
    Ok(Some(RunConfig::parse(&text)?))
}

fn command_name(c: &Command) -> String {
    let value = |v: &dyn Fn() -> Option<clap::builder::PossibleValue>| {
        v().map(|p| p.get_name().to_owned()).unwrap_or_default()
    };
    match c {
        Command::Validate => "validate".into(),
        Command::Theta { mode } => format!("theta {}", value(&|| mode.to_possible_value())),
        Command::Verify { which } => format!("verify {}", value(&|| which.to_possible_value())),
        Command::Efun { function, .. } => format!("efun {}", value(&|| function.to_possible_value())),
        Command::Fixture => "fixture".into(),
    }
}

fn run(cli: &Cli) -> Result<(Value, u8), Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(input_error("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| input_error(format!("thread pool: {e}")))?;
    }
    let start = Instant::now();
    let cfg = read_config(cli.config.as_ref())?;
    if let Command::Fixture = cli.command {
        let v = serde_json::to_value(RunConfig::canonical()).expect("serializable");
        return Ok((v, 0));
    }
    let need = || cfg.as_ref().ok_or_else(|| input_error("--config is required".into()));
    let outcome: Outcome = match &cli.command {
        Command::Validate => commands::validate(need()?)?,
        Command::Theta { mode: Mode::Hol } => commands::theta_hol(need()?)?,
        Command::Theta { mode: Mode::Complete } => commands::theta_complete(need()?)?,
        Command::Verify { which } => {
            let c = need()?;
            match which {
                Check::SurfaceIdentity => commands::verify_surface_identity(c)?,
                Check::Stokes => commands::verify_stokes(c)?,
                Check::Modularity => commands::verify_modularity(c)?,
                Check::Shadow => commands::verify_shadow(c)?,
                Check::Intersection => commands::verify_intersection(c)?,
            }
        }
        Command::Efun { function, args } => commands::efun((*function).into(), args, cfg.as_ref())?,
        Command::Fixture => unreachable!("handled above"),
    };
    let inputs = match &cli.command {
        Command::Efun { args, .. } => json!({ "args": args, "config": cfg }),
        _ => serde_json::to_value(&cfg).expect("serializable"),
    };
    let mut report = json!({
        "command": command_name(&cli.command),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.as_ref().map(|c| c.seed),
        "inputs": inputs,
        "outputs": outcome.outputs,
        "pass": outcome.pass,
    });
    if let Some(r) = outcome.residuals {
        report["residuals"] = r;
    }
    if cli.timings {
        report["timings"] = json!({ "total_seconds": start.elapsed().as_secs_f64() });
    }
    let code = match (&cli.command, outcome.pass) {
        (_, true) => 0,
        (Command::Validate, false) => EXIT_INCIDENCE,
        (_, false) => EXIT_TOLERANCE,
    };
    Ok((report, code))
}

fn emit(report: &Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| input_error(format!("writing {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| input_error(format!("writing standard output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|(report, code)| emit(&report, cli.out.as_ref()).map(|_| code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
