use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use ccsim::{cmd_check, cmd_examples, cmd_run, RunConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ccsim", version, about = "Current-conveyor circuit simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a deck's analysis and write CSV (and optionally SVG)
    Run {
        deck: PathBuf,
        /// CSV destination; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG plot destination
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Probe such as V(out) or I(U1.X); replaces the deck's .PRINT list
        #[arg(long = "probe", value_name = "P")]
        probes: Vec<String>,
    },
    /// Parse and elaborate a deck without simulating it
    Check { deck: PathBuf },
    /// List the bundled decks, or print one by name
    Examples { name: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let result = match cli.command {
        Command::Run { deck, out, svg, probes } => cmd_run(
            &RunConfig {
                deck_path: deck,
                out_csv: out,
                out_svg: svg,
                probes,
            },
            &mut stdout,
        ),
        Command::Check { deck } => cmd_check(&deck, &mut stdout),
        Command::Examples { name } => cmd_examples(name.as_deref(), &mut stdout),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
