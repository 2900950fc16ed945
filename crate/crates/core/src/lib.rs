//! Modified nodal analysis simulator with first-class current-conveyor
//! elements (CCI, CCII±, CCCII±).
//!
//! The pipeline is: [`netlist::parse_deck`] → [`netlist::elaborate`] →
//! [`elements::expand_macros`] → one of the analyses in [`analysis`].
//! All circuits in scope are linear, so every analysis reduces to one or
//! more dense LU solves in [`solver`].

pub mod analysis;
pub mod elements;
pub mod netlist;
pub mod scalar;
pub mod solver;

pub use analysis::{run_ac, run_op, run_tran, Execution, Waveform};
pub use elements::{expand_macros, Element, ElementKind};
pub use netlist::{elaborate, parse_deck, Circuit, Deck, Probe};
pub use solver::{lu_solve, Solution};

/// Thermal voltage at 300 K, used when a CCCII card omits `VT=`.
pub const DEFAULT_VT: f64 = 0.02585;

/// Default open-loop gain of the controlled-source macro-model.
pub const DEFAULT_MACRO_GAIN: f64 = 1e6;
