//! DC operating point, logarithmic AC sweep, fixed-step trapezoidal
//! transient, and waveform measurements.

mod ac;
mod measure;
mod op;
mod tran;
mod waveform;

pub use ac::{run_ac, run_ac_with, sweep_frequencies};
pub use measure::{measure_bandwidth, measure_gain, Bandwidth, Gain, WaveSample};
pub use op::run_op;
pub use tran::run_tran;
pub use waveform::{Abscissa, Waveform};

use std::borrow::Cow;

use thiserror::Error;

use crate::elements::expand_macros;
use crate::netlist::Circuit;
use crate::solver::{ProbeError, SolveError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("AC analysis needs at least one source with an AC value")]
    NoAcSource,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// How independent solves (AC sweep points) are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon thread pool when the `parallel` feature is enabled, otherwise
    /// identical to `Sequential`.
    #[default]
    Parallel,
}

fn expanded(circuit: &Circuit) -> Cow<'_, Circuit> {
    if circuit.is_expanded() {
        Cow::Borrowed(circuit)
    } else {
        Cow::Owned(expand_macros(circuit))
    }
}
