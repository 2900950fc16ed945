use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{expanded, Abscissa, AnalysisError, Execution, Waveform};
use crate::elements::{ElementKind, StampMode};
use crate::netlist::{Circuit, SweepSpec};
use crate::solver::{lu_solve, mna, ProbeIndex, Solution, UnknownLayout};

/// Sweep points `fstart * 10^(k / pts_per_decade)`, ending exactly at
/// `fstop` (appended when the grid misses it).
pub fn sweep_frequencies(spec: &SweepSpec) -> Vec<f64> {
    let ppd = spec.pts_per_decade as f64;
    let mut freqs = Vec::new();
    for k in 0.. {
        let f = spec.fstart * 10f64.powf(k as f64 / ppd);
        if f > spec.fstop * (1.0 + 1e-9) {
            break;
        }
        freqs.push(f);
    }
    match freqs.last_mut() {
        Some(last) if (*last - spec.fstop).abs() <= 1e-9 * spec.fstop => *last = spec.fstop,
        _ => freqs.push(spec.fstop),
    }
    freqs
}

/// Small-signal sweep using the default [`Execution`].
pub fn run_ac(circuit: &Circuit, spec: &SweepSpec) -> Result<Waveform<Complex64>, AnalysisError> {
    run_ac_with(circuit, spec, Execution::default())
}

/// Small-signal sweep. Points are independent solves and may run in
/// parallel; results are always in frequency order.
pub fn run_ac_with(
    circuit: &Circuit,
    spec: &SweepSpec,
    execution: Execution,
) -> Result<Waveform<Complex64>, AnalysisError> {
    let has_ac = circuit.elements.iter().any(|e| {
        matches!(&e.kind, ElementKind::VSource { wave, .. } | ElementKind::ISource { wave, .. } if wave.ac.is_some())
    });
    if !has_ac {
        return Err(AnalysisError::NoAcSource);
    }
    let circuit = expanded(circuit);
    let layout = Arc::new(UnknownLayout::new(&circuit, false));
    let index = Arc::new(ProbeIndex::new(&circuit, &layout));
    let freqs = sweep_frequencies(spec);

    let solve_at = |f: &f64| -> Result<Solution<Complex64>, AnalysisError> {
        let mode = StampMode::Ac { omega: 2.0 * PI * f };
        let system = mna::assemble(&circuit, layout.clone(), index.clone(), &mode);
        Ok(lu_solve(&system)?)
    };
    let points: Result<Vec<_>, _> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => freqs.par_iter().map(solve_at).collect(),
        _ => freqs.iter().map(solve_at).collect(),
    };
    Ok(Waveform {
        kind: Abscissa::Frequency,
        abscissa: freqs,
        points: points?,
    })
}
