use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spectral_fm::cli::{self, Defaults, EXIT_USAGE};
use spectral_fm::SurfaceKind;

#[derive(Clone, Copy, ValueEnum)]
enum Surface {
    K3,
    Abelian,
}

impl From<Surface> for SurfaceKind {
    fn from(s: Surface) -> Self {
        match s {
            Surface::K3 => SurfaceKind::K3WithSection,
            Surface::Abelian => SurfaceKind::AbelianProduct,
        }
    }
}

/// Spectral data, Fourier-Mukai invariants and Simpson stability over
/// newline-delimited JSON.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Surface for payloads that do not name one.
    #[arg(long, global = true, value_enum)]
    surface: Option<Surface>,
    /// Request file (default stdin).
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Report file (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Requests evaluated concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one report per request line (the default).
    Batch,
    /// Run the self-check suite; writes one report, summary on stderr.
    Verify,
    /// Run a single command with an inline JSON payload.
    Run {
        command: String,
        payload: Option<String>,
    },
}

fn read_input(path: &Option<PathBuf>) -> io::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let defaults = Defaults {
        surface: args.surface.map(Into::into),
    };
    let (text, code) = match args.command.unwrap_or(Command::Batch) {
        Command::Batch => match read_input(&args.input) {
            Ok(input) => cli::batch(&input, &defaults, args.jobs),
            Err(e) => {
                eprintln!("error: cannot read input: {e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
        },
        Command::Verify => {
            let o = cli::run("verify", &serde_json::Value::Null, &defaults);
            for r in &o.report.results {
                eprintln!(
                    "criterion {} [{}] {}",
                    r["criterion"],
                    if r["passed"] == true { "PASS" } else { "FAIL" },
                    r["name"].as_str().unwrap_or_default()
                );
            }
            (o.render() + "\n", o.exit_code)
        }
        Command::Run { command, payload } => {
            let payload = match payload.as_deref().map(serde_json::from_str).transpose() {
                Ok(p) => p.unwrap_or_default(),
                Err(e) => {
                    eprintln!("error: payload is not JSON: {e}");
                    return ExitCode::from(EXIT_USAGE as u8);
                }
            };
            let o = cli::run(&command, &payload, &defaults);
            (o.render() + "\n", o.exit_code)
        }
    };
    if let Err(e) = write_output(&args.out, &text) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(code as u8)
}
