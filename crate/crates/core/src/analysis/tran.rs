use std::sync::Arc;

use super::{expanded, Abscissa, AnalysisError, Waveform};
use crate::elements::{CapState, ElementKind, StampMode};
use crate::netlist::{Circuit, NodeId, TranSpec};
use crate::solver::mna::{assemble, assemble_rhs};
use crate::solver::{AuxContext, LuFactors, ProbeIndex, Solution, UnknownLayout};

struct Cap {
    a: NodeId,
    b: NodeId,
    c: f64,
    ic: Option<f64>,
}

fn node_v(values: &[f64], n: NodeId) -> f64 {
    if n.is_ground() {
        0.0
    } else {
        values[n.0 - 1]
    }
}

/// Fixed-step trapezoidal transient from t = 0 to `tstop`, emitting every
/// step including both end points.
///
/// The t = 0 state is the operating point with sources at their t = 0
/// value. Capacitors with `IC=` are then clamped to that voltage (the rest
/// to their operating-point voltage) to obtain consistent initial currents.
/// If every capacitor has `IC=`, the operating point is skipped.
pub fn run_tran(circuit: &Circuit, spec: &TranSpec) -> Result<Waveform<f64>, AnalysisError> {
    let circuit = expanded(circuit);
    let layout = Arc::new(UnknownLayout::new(&circuit, false));
    let index = Arc::new(ProbeIndex::new(&circuit, &layout));
    let caps: Vec<Cap> = circuit
        .elements
        .iter()
        .filter_map(|e| match e.kind {
            ElementKind::Capacitor { a, b, c, ic } => Some(Cap { a, b, c, ic }),
            _ => None,
        })
        .collect();

    let all_ic = !caps.is_empty() && caps.iter().all(|c| c.ic.is_some());
    let any_ic = caps.iter().any(|c| c.ic.is_some());
    let op = if all_ic {
        None
    } else {
        let sys = assemble::<f64>(&circuit, layout.clone(), index.clone(), &StampMode::DcAt { t: 0.0 });
        Some(sys.factor()?.solve(&sys.rhs))
    };

    let (mut values, mut states): (Vec<f64>, Vec<CapState>) = if any_ic {
        let voltages: Vec<f64> = caps
            .iter()
            .map(|c| {
                c.ic.unwrap_or_else(|| {
                    let op = op.as_deref().expect("operating point");
                    node_v(op, c.a) - node_v(op, c.b)
                })
            })
            .collect();
        let clamped_layout = Arc::new(UnknownLayout::new(&circuit, true));
        let mode = StampMode::Clamped {
            t: 0.0,
            voltages: &voltages,
        };
        let sys = assemble::<f64>(&circuit, clamped_layout, index.clone(), &mode);
        let mut x = sys.factor()?.solve(&sys.rhs);
        let currents = x.split_off(layout.len());
        let states = voltages.iter().zip(currents).map(|(&v, i)| CapState { v, i }).collect();
        (x, states)
    } else {
        let x = op.expect("operating point");
        let states = caps
            .iter()
            .map(|c| CapState {
                v: node_v(&x, c.a) - node_v(&x, c.b),
                i: 0.0,
            })
            .collect();
        (x, states)
    };

    let steps = ((spec.tstop / spec.tstep) - 1e-9).ceil().max(1.0) as usize;
    let mut abscissa = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let push =
        |abscissa: &mut Vec<f64>, points: &mut Vec<Solution<f64>>, t: f64, values: Vec<f64>, states: &[CapState]| {
            abscissa.push(t);
            points.push(Solution::new(
                values,
                index.clone(),
                &AuxContext::Tran {
                    t,
                    caps: states.to_vec(),
                },
            ));
        };
    push(&mut abscissa, &mut points, 0.0, values.clone(), &states);

    // The matrix only depends on dt for a linear circuit, so one
    // factorisation serves every step of equal length.
    let mut factored: Option<(f64, LuFactors<f64>)> = None;
    let mut t_prev = 0.0;
    for k in 1..=steps {
        let t = if k == steps { spec.tstop } else { k as f64 * spec.tstep };
        let dt = t - t_prev;
        let mode = StampMode::Tran { t, dt, caps: &states };
        let reuse = factored.as_ref().is_some_and(|(h, _)| (h - dt).abs() <= 1e-12 * dt);
        if !reuse {
            let sys = assemble::<f64>(&circuit, layout.clone(), index.clone(), &mode);
            factored = Some((dt, sys.factor()?));
        }
        let lu = &factored.as_ref().expect("factored").1;
        let rhs = assemble_rhs::<f64>(&circuit, &layout, &mode);
        values = lu.solve(&rhs);

        for (cap, st) in caps.iter().zip(states.iter_mut()) {
            let v = node_v(&values, cap.a) - node_v(&values, cap.b);
            let geq = 2.0 * cap.c / dt;
            *st = CapState {
                v,
                i: geq * (v - st.v) - st.i,
            };
        }
        push(&mut abscissa, &mut points, t, values.clone(), &states);
        t_prev = t;
    }

    Ok(Waveform {
        kind: Abscissa::Time,
        abscissa,
        points,
    })
}
