//! `ordclass`: run workbench commands from the command line or a script.

use clap::Parser;
use ordclass::oracle::{CACHE_ENV, DEFAULT_GRID_CAP, DEFAULT_SUBSET_CAP};
use ordclass::session::{Format, Session, SessionConfig};
use ordclass::skeleton::ClassContext;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

/// Symbolic workbench for the ordinal classes induced by the ≤₁ relation.
///
/// Runs the command given as trailing arguments, the commands of `--script`,
/// or, with neither, the commands read from standard input.
#[derive(Parser)]
#[command(name = "ordclass", version)]
struct Cli {
    /// Context file with declared atoms and recorded m values.
    #[arg(long)]
    context: Option<PathBuf>,
    /// Script with one command per line.
    #[arg(long)]
    script: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for cached grid relations; overrides the environment.
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    subset_cap: usize,
    #[arg(long, default_value_t = DEFAULT_GRID_CAP)]
    grid_cap: usize,
    /// A single command, e.g. `eval w^(eps(0))+1`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    command: Vec<String>,
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn run() -> Result<String, ExitCode> {
    let cli = Cli::parse();
    let ctx = match &cli.context {
        Some(p) => ClassContext::from_json(&read(p)?).map_err(|e| {
            eprintln!("error: {}: {e}", p.display());
            ExitCode::from(2)
        })?,
        None => ClassContext::new(),
    };
    let config = SessionConfig {
        format: cli.format,
        subset_cap: cli.subset_cap,
        grid_cap: cli.grid_cap,
        cache_dir: cli.cache_dir,
    };
    let mut session = Session::new(ctx, config);
    let script = match (&cli.script, cli.command.is_empty()) {
        (Some(p), _) => read(p)?,
        (None, false) => cli.command.join(" "),
        (None, true) => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| {
                eprintln!("error: stdin: {e}");
                ExitCode::from(1)
            })?;
            s
        }
    };
    session.run_script(&script).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    })
}

fn main() -> ExitCode {
    match run() {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(code) => code,
    }
}
