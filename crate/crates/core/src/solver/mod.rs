//! MNA assembly and dense LU solution, in real (DC, transient) or complex
//! (AC) arithmetic.

mod lu;

mod solution;

pub use lu::{residual_inf, LuFactors, SingularPivot, PIVOT_THRESHOLD};
pub(crate) mod mna;
pub use mna::{build_system, AuxContext, MnaSystem, Unknown, UnknownLayout};
pub use solution::{branch_currents, ProbeError, ProbeIndex, Solution};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// Elimination broke down at the named unknown.
    #[error("{}singular matrix at {unknown}: {diagnostic}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    SingularMatrix {
        unknown: String,
        diagnostic: String,
        /// Deck line of an element related to the failure, when known.
        line: Option<usize>,
    },
}

/// Factor and solve an assembled system.
pub fn lu_solve<T: crate::scalar::Scalar>(system: &MnaSystem<T>) -> Result<Solution<T>, SolveError> {
    let lu = system.factor()?;
    Ok(system.solution(lu.solve(&system.rhs)))
}
