use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ccsim_core::analysis::AnalysisError;
use ccsim_core::netlist::Analysis;
use ccsim_core::{elaborate, parse_deck, run_ac, run_op, run_tran, Circuit, Deck, Probe};
use thiserror::Error;

use crate::catalog::{self, EXAMPLES};
use crate::csv::write_csv;
use crate::svg::write_svg;
use crate::table::{tabulate, Outcome};

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub deck_path: PathBuf,
    /// Standard output when absent.
    pub out_csv: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    /// Replaces the deck's `.PRINT` list when non-empty.
    pub probes: Vec<String>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: file not found")]
    FileNotFound(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    /// Parse or elaboration diagnostics, one per line.
    #[error("{0}")]
    Deck(String),
    #[error("{0}")]
    Probe(String),
    #[error("{0}")]
    Solve(String),
    #[error("unknown example '{0}' (run `ccsim examples` for the list)")]
    UnknownExample(String),
}

impl CliError {
    /// 2 for solver failures, 1 for everything the user can fix in the input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solve(_) => 2,
            _ => 1,
        }
    }
}

fn read_deck(path: &Path) -> Result<String, CliError> {
    let shown = path.display().to_string();
    fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CliError::FileNotFound(shown),
        _ => CliError::Io { path: shown, source: e },
    })
}

fn prefixed(path: &Path, message: impl std::fmt::Display) -> String {
    message
        .to_string()
        .lines()
        .map(|l| format!("{}: {l}", path.display()))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parse and elaborate, with every diagnostic prefixed by the file name.
pub fn load(path: &Path) -> Result<(Deck, Circuit), CliError> {
    let text = read_deck(path)?;
    let deck = parse_deck(&text).map_err(|e| CliError::Deck(prefixed(path, e)))?;
    let circuit = elaborate(&deck).map_err(|e| CliError::Deck(prefixed(path, e)))?;
    Ok((deck, circuit))
}

pub fn simulate(deck: &Deck, circuit: &Circuit, path: &Path) -> Result<Outcome, CliError> {
    let lift = |e: AnalysisError| match e {
        AnalysisError::Solve(_) => CliError::Solve(prefixed(path, e)),
        AnalysisError::Probe(_) => CliError::Probe(prefixed(path, e)),
        _ => CliError::Deck(prefixed(path, e)),
    };
    Ok(match deck.analysis() {
        Analysis::Op => Outcome::Op(run_op(circuit).map_err(lift)?),
        Analysis::Ac(spec) => Outcome::Ac(run_ac(circuit, &spec).map_err(lift)?),
        Analysis::Tran(spec) => Outcome::Tran(run_tran(circuit, &spec).map_err(lift)?),
    })
}

/// Requested probes, else the deck's `.PRINT` list, else every node voltage.
pub fn resolve_probes(config: &RunConfig, deck: &Deck, circuit: &Circuit) -> Result<Vec<Probe>, CliError> {
    if !config.probes.is_empty() {
        return config
            .probes
            .iter()
            .map(|p| Probe::parse(p).ok_or_else(|| CliError::Probe(format!("malformed probe '{p}'"))))
            .collect();
    }
    let printed = deck.probes();
    if !printed.is_empty() {
        return Ok(printed);
    }
    Ok(circuit
        .nodes
        .iter()
        .filter(|(id, name)| !id.is_ground() && !name.contains('#'))
        .map(|(_, name)| Probe::Voltage(name.to_string()))
        .collect())
}

fn create(path: &Path) -> Result<io::BufWriter<fs::File>, CliError> {
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })
}

fn io_err(path: &str) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io {
        path: path.to_string(),
        source: e,
    }
}

pub fn cmd_run(config: &RunConfig, stdout: &mut impl Write) -> Result<(), CliError> {
    let path = config.deck_path.as_path();
    let (deck, circuit) = load(path)?;
    let probes = resolve_probes(config, &deck, &circuit)?;
    let outcome = simulate(&deck, &circuit, path)?;
    let table = tabulate(&outcome, &probes).map_err(|e| CliError::Probe(prefixed(path, e)))?;

    match &config.out_csv {
        Some(p) => {
            let mut f = create(p)?;
            let shown = p.display().to_string();
            write_csv(&table, &mut f)
                .and_then(|_| f.flush())
                .map_err(io_err(&shown))?;
        }
        None => write_csv(&table, stdout).map_err(io_err("<stdout>"))?,
    }
    if let Some(p) = &config.out_svg {
        let mut f = create(p)?;
        let shown = p.display().to_string();
        write_svg(&table, &mut f)
            .and_then(|_| f.flush())
            .map_err(io_err(&shown))?;
    }
    Ok(())
}

pub fn cmd_check(path: &Path, stdout: &mut impl Write) -> Result<(), CliError> {
    let (deck, circuit) = load(path)?;
    let analysis = match deck.analysis() {
        Analysis::Op => ".OP",
        Analysis::Ac(_) => ".AC",
        Analysis::Tran(_) => ".TRAN",
    };
    writeln!(
        stdout,
        "{}: ok, {} nodes, {} elements, {analysis}",
        path.display(),
        circuit.nodes.len() - 1,
        circuit.elements.len()
    )
    .map_err(io_err("<stdout>"))
}

pub fn cmd_examples(name: Option<&str>, stdout: &mut impl Write) -> Result<(), CliError> {
    let result = match name {
        None => EXAMPLES
            .iter()
            .try_for_each(|e| writeln!(stdout, "{:<16} {}", e.name, e.summary)),
        Some(n) => {
            let e = catalog::find(n).ok_or_else(|| CliError::UnknownExample(n.to_string()))?;
            stdout.write_all(e.text.as_bytes())
        }
    };
    result.map_err(io_err("<stdout>"))
}
