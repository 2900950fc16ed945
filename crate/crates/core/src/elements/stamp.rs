//! MNA stamps.
//!
//! Rows and columns live in an extended index space: node `n` maps to
//! `n.0` (so ground is 0), and branch unknowns follow the nodes. A
//! [`StampTarget`] is responsible for discarding row/column 0.

use std::f64::consts::PI;

use super::{Conveyor, Element, ElementKind, Generation, SourceWave};
use crate::netlist::NodeId;
use crate::scalar::Scalar;

pub trait StampTarget<T: Scalar> {
    /// Accumulate into the coefficient at `(row, col)`.
    fn add_matrix(&mut self, row: usize, col: usize, value: T);

    /// Accumulate into the right-hand side at `row`.
    fn add_rhs(&mut self, row: usize, value: T);

    fn node_row(&self, node: NodeId) -> usize {
        node.0
    }
}

/// Capacitor state carried between transient steps: the voltage across
/// `a - b` and the current flowing from `a` through the capacitor to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CapState {
    pub v: f64,
    pub i: f64,
}

/// How reactive elements and sources are evaluated for one assembly.
#[derive(Debug, Clone, Copy)]
pub enum StampMode<'a> {
    /// Operating point: DC source values, capacitors open.
    Dc,
    /// Operating point with sources at their transient value at `t`.
    DcAt { t: f64 },
    /// Every capacitor held at a fixed voltage (indexed by capacitor slot)
    /// by a branch; used to find consistent capacitor currents at t = 0.
    Clamped { t: f64, voltages: &'a [f64] },
    /// Small-signal phasor analysis at angular frequency `omega`.
    Ac { omega: f64 },
    /// One trapezoidal step ending at `t`, from the states of the
    /// previous time point.
    Tran { t: f64, dt: f64, caps: &'a [CapState] },
}

/// Per-element unknown assignment, resolved by the system builder.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Slots {
    /// Extended index of the element's branch unknown.
    pub branch: Option<usize>,
    /// Capacitor ordinal.
    pub cap: Option<usize>,
    /// Extended index of the controlling branch (CCCS only).
    pub control: Option<usize>,
}

fn source_value<T: Scalar>(wave: &SourceWave, mode: &StampMode<'_>) -> T {
    match *mode {
        StampMode::Dc => T::from_real(wave.dc),
        StampMode::DcAt { t } | StampMode::Clamped { t, .. } | StampMode::Tran { t, .. } => T::from_real(wave.at(t)),
        StampMode::Ac { .. } => match wave.ac {
            Some((mag, phase_deg)) => {
                let ph = phase_deg * PI / 180.0;
                T::from_parts(mag * ph.cos(), mag * ph.sin())
            }
            None => T::ZERO,
        },
    }
}

fn admittance<T: Scalar>(t: &mut impl StampTarget<T>, a: NodeId, b: NodeId, y: T) {
    let (ra, rb) = (t.node_row(a), t.node_row(b));
    t.add_matrix(ra, ra, y);
    t.add_matrix(rb, rb, y);
    t.add_matrix(ra, rb, -y);
    t.add_matrix(rb, ra, -y);
}

/// Branch `k` carrying current from `pos` through the element to `neg`,
/// constrained to `V(pos) - V(neg) = value`.
fn voltage_branch<T: Scalar>(t: &mut impl StampTarget<T>, pos: NodeId, neg: NodeId, k: usize, value: T) {
    let (rp, rn) = (t.node_row(pos), t.node_row(neg));
    t.add_matrix(rp, k, T::ONE);
    t.add_matrix(rn, k, -T::ONE);
    t.add_matrix(k, rp, T::ONE);
    t.add_matrix(k, rn, -T::ONE);
    t.add_rhs(k, value);
}

/// Stamp a resistor, capacitor or independent source.
pub fn stamp_two_terminal<T: Scalar>(
    kind: &ElementKind,
    slots: Slots,
    mode: &StampMode<'_>,
    target: &mut impl StampTarget<T>,
) {
    match *kind {
        ElementKind::Resistor { a, b, r } => admittance(target, a, b, T::from_real(1.0 / r)),
        ElementKind::Capacitor { a, b, c, .. } => match *mode {
            StampMode::Dc | StampMode::DcAt { .. } => {}
            StampMode::Ac { omega } => admittance(target, a, b, T::from_parts(0.0, omega * c)),
            StampMode::Clamped { voltages, .. } => {
                let k = slots.branch.expect("clamped capacitor needs a branch");
                let slot = slots.cap.expect("capacitor slot");
                voltage_branch(target, a, b, k, T::from_real(voltages[slot]));
            }
            StampMode::Tran { dt, caps, .. } => {
                // Trapezoidal companion: i_n = geq (v_n - v_{n-1}) - i_{n-1}
                let prev = caps[slots.cap.expect("capacitor slot")];
                let geq = 2.0 * c / dt;
                let ieq = geq * prev.v + prev.i;
                admittance(target, a, b, T::from_real(geq));
                let (ra, rb) = (target.node_row(a), target.node_row(b));
                target.add_rhs(ra, T::from_real(ieq));
                target.add_rhs(rb, T::from_real(-ieq));
            }
        },
        ElementKind::VSource { pos, neg, ref wave } => {
            let k = slots.branch.expect("voltage source needs a branch");
            voltage_branch(target, pos, neg, k, source_value(wave, mode));
        }
        ElementKind::ISource { pos, neg, ref wave } => {
            let i: T = source_value(wave, mode);
            let (rp, rn) = (target.node_row(pos), target.node_row(neg));
            target.add_rhs(rp, -i);
            target.add_rhs(rn, i);
        }
        _ => unreachable!("not a two-terminal element: {kind:?}"),
    }
}

/// Stamp an ideal-level conveyor (macro-level conveyors are expanded into
/// primitives before assembly).
///
/// The branch row enforces `V(x) - alpha V(y) - rx ix = 0`. KCL at X gains
/// `+ix`, at Y gains `+ix` for a CCI, and at Z gains `+beta ix`. The
/// remainder returns through ground, which stands in for the supply rails.
pub fn stamp_conveyor<T: Scalar>(conv: &Conveyor, slots: Slots, target: &mut impl StampTarget<T>) {
    let k = slots.branch.expect("conveyor needs a branch");
    let beta = conv.beta();
    let (ry, rx, rz) = (
        target.node_row(conv.y),
        target.node_row(conv.x),
        target.node_row(conv.z),
    );
    let p = conv.nonideal;

    target.add_matrix(k, rx, T::ONE);
    target.add_matrix(k, ry, T::from_real(-p.alpha));
    let series = conv.effective_rx();
    if series != 0.0 {
        target.add_matrix(k, k, T::from_real(-series));
    }

    let y_gain = if conv.generation == Generation::Cci { 1.0 } else { 0.0 };
    target.add_matrix(rx, k, T::ONE);
    if y_gain != 0.0 {
        target.add_matrix(ry, k, T::ONE);
    }
    target.add_matrix(rz, k, T::from_real(beta));
    target.add_matrix(0, k, T::from_real(-(1.0 + y_gain + beta)));

    if let Some(r) = p.ry {
        admittance(target, conv.y, NodeId::GROUND, T::from_real(1.0 / r));
    }
    if let Some(r) = p.rz {
        admittance(target, conv.z, NodeId::GROUND, T::from_real(1.0 / r));
    }
}

/// Stamp any element.
pub fn stamp<T: Scalar>(elem: &Element, slots: Slots, mode: &StampMode<'_>, target: &mut impl StampTarget<T>) {
    match &elem.kind {
        ElementKind::Conveyor(c) => stamp_conveyor(c, slots, target),
        &ElementKind::Vcvs {
            pos,
            neg,
            ctrl_pos,
            ctrl_neg,
            gain,
        } => {
            let k = slots.branch.expect("VCVS needs a branch");
            voltage_branch(target, pos, neg, k, T::ZERO);
            let (cp, cn) = (target.node_row(ctrl_pos), target.node_row(ctrl_neg));
            target.add_matrix(k, cp, T::from_real(-gain));
            target.add_matrix(k, cn, T::from_real(gain));
        }
        &ElementKind::Cccs { from, into, gain, .. } => {
            let c = slots.control.expect("CCCS needs a controlling branch");
            let (rf, ri) = (target.node_row(from), target.node_row(into));
            target.add_matrix(ri, c, T::from_real(-gain));
            target.add_matrix(rf, c, T::from_real(gain));
        }
        kind => stamp_two_terminal(kind, slots, mode, target),
    }
}
