use super::{expanded, AnalysisError};
use crate::elements::StampMode;
use crate::netlist::Circuit;
use crate::solver::{build_system, lu_solve, Solution};

/// DC operating point: DC source values, capacitors open.
pub fn run_op(circuit: &Circuit) -> Result<Solution<f64>, AnalysisError> {
    let circuit = expanded(circuit);
    let system = build_system::<f64>(&circuit, &StampMode::Dc);
    Ok(lu_solve(&system)?)
}
