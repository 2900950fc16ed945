//! Analysis results flattened into named numeric columns.

use ccsim_core::solver::ProbeError;
use ccsim_core::{Probe, Solution, Waveform};
use num_complex::Complex64;

/// Result of running a deck's analysis.
#[derive(Debug, Clone)]
pub enum Outcome {
    Op(Solution<f64>),
    Ac(Waveform<Complex64>),
    Tran(Waveform<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Op,
    Time,
    Freq,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::Op => "op",
            Axis::Time => "time",
            Axis::Freq => "freq",
        }
    }
}

/// One row per solution point. `xs` holds the abscissa (0 for an
/// operating point).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub axis: Axis,
    pub columns: Vec<String>,
    pub xs: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// Columns worth plotting: magnitudes for AC, everything otherwise.
    pub fn plotted(&self) -> Vec<usize> {
        match self.axis {
            Axis::Freq => (0..self.columns.len()).step_by(2).collect(),
            _ => (0..self.columns.len()).collect(),
        }
    }
}

pub fn db(z: Complex64) -> f64 {
    20.0 * z.norm().log10()
}

/// Phase in degrees with negative zero folded to zero.
pub fn phase_deg(z: Complex64) -> f64 {
    let p = z.arg().to_degrees();
    if p == 0.0 {
        0.0
    } else {
        p
    }
}

fn columns_of<T>(wave: &Waveform<T>, probes: &[Probe]) -> Result<Vec<Vec<T>>, ProbeError>
where
    T: ccsim_core::scalar::Scalar,
{
    probes.iter().map(|p| wave.column(p)).collect()
}

pub fn tabulate(outcome: &Outcome, probes: &[Probe]) -> Result<Table, ProbeError> {
    match outcome {
        Outcome::Op(sol) => {
            let row = probes.iter().map(|p| sol.probe(p)).collect::<Result<Vec<_>, _>>()?;
            Ok(Table {
                axis: Axis::Op,
                columns: probes.iter().map(Probe::to_string).collect(),
                xs: vec![0.0],
                rows: vec![row],
            })
        }
        Outcome::Tran(wave) => {
            let cols = columns_of(wave, probes)?;
            Ok(Table {
                axis: Axis::Time,
                columns: probes.iter().map(Probe::to_string).collect(),
                xs: wave.abscissa.clone(),
                rows: (0..wave.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect(),
            })
        }
        Outcome::Ac(wave) => {
            let cols = columns_of(wave, probes)?;
            let columns = probes
                .iter()
                .flat_map(|p| [format!("{p}.mag_db"), format!("{p}.phase_deg")])
                .collect();
            Ok(Table {
                axis: Axis::Freq,
                columns,
                xs: wave.abscissa.clone(),
                rows: (0..wave.len())
                    .map(|i| cols.iter().flat_map(|c| [db(c[i]), phase_deg(c[i])]).collect())
                    .collect(),
            })
        }
    }
}
