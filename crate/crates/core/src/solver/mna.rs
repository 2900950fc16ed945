use std::sync::Arc;

use super::lu::LuFactors;
use super::solution::{ProbeIndex, Solution};
use super::SolveError;
use crate::elements::{stamp, CapState, ElementKind, Slots, StampMode, StampTarget};
use crate::netlist::{Circuit, NodeId};
use crate::scalar::Scalar;

/// What a row/column of the system stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    Node(NodeId),
    /// Branch current of the element at this index.
    Branch(usize),
}

/// Deterministic unknown ordering: non-ground nodes in intern order, then
/// one branch per element that needs it, in element order.
#[derive(Debug, Clone, PartialEq)]
pub struct UnknownLayout {
    n_nodes: usize,
    slots: Vec<Slots>,
    unknowns: Vec<Unknown>,
    n_caps: usize,
}

impl UnknownLayout {
    /// With `clamp_caps`, every capacitor also gets a branch, placed after
    /// all regular branches so the regular layout is a prefix.
    pub fn new(circuit: &Circuit, clamp_caps: bool) -> Self {
        let n_nodes = circuit.nodes.len();
        let mut unknowns: Vec<Unknown> = (1..n_nodes).map(|i| Unknown::Node(NodeId(i))).collect();
        let mut slots = vec![Slots::default(); circuit.elements.len()];
        let mut n_caps = 0;
        for (i, e) in circuit.elements.iter().enumerate() {
            if e.kind.has_branch() {
                slots[i].branch = Some(unknowns.len() + 1);
                unknowns.push(Unknown::Branch(i));
            }
            if matches!(e.kind, ElementKind::Capacitor { .. }) {
                slots[i].cap = Some(n_caps);
                n_caps += 1;
            }
        }
        if clamp_caps {
            for (i, e) in circuit.elements.iter().enumerate() {
                if matches!(e.kind, ElementKind::Capacitor { .. }) {
                    slots[i].branch = Some(unknowns.len() + 1);
                    unknowns.push(Unknown::Branch(i));
                }
            }
        }
        for (i, e) in circuit.elements.iter().enumerate() {
            if let ElementKind::Cccs { control, .. } = e.kind {
                slots[i].control = slots[control].branch;
            }
        }
        UnknownLayout {
            n_nodes,
            slots,
            unknowns,
            n_caps,
        }
    }

    /// Number of unknowns (rows of the system).
    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    pub fn slots(&self, element: usize) -> Slots {
        self.slots[element]
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn cap_count(&self) -> usize {
        self.n_caps
    }

    pub fn node_count(&self) -> usize {
        self.n_nodes
    }
}

/// Evaluation context for quantities not held in the unknown vector
/// (capacitor and current-source currents).
#[derive(Debug, Clone, PartialEq)]
pub enum AuxContext {
    Dc,
    DcAt(f64),
    Ac(f64),
    /// Time point with capacitor states already updated to it.
    Tran {
        t: f64,
        caps: Vec<CapState>,
    },
}

#[derive(Debug, Clone)]
pub struct MnaSystem<T> {
    pub n: usize,
    /// Row-major `n x n`.
    pub matrix: Vec<T>,
    pub rhs: Vec<T>,
    pub index: Arc<ProbeIndex>,
    pub aux: AuxContext,
    layout: Arc<UnknownLayout>,
}

/// Assembly sink mapping extended indices to system rows, dropping ground.
struct Sink<'a, T> {
    n: usize,
    matrix: Option<&'a mut [T]>,
    rhs: &'a mut [T],
}

impl<T: Scalar> StampTarget<T> for Sink<'_, T> {
    #[inline]
    fn add_matrix(&mut self, row: usize, col: usize, value: T) {
        if row == 0 || col == 0 {
            return;
        }
        if let Some(m) = self.matrix.as_deref_mut() {
            m[(row - 1) * self.n + col - 1] += value;
        }
    }

    #[inline]
    fn add_rhs(&mut self, row: usize, value: T) {
        if row != 0 {
            self.rhs[row - 1] += value;
        }
    }
}

fn aux_for(mode: &StampMode<'_>) -> AuxContext {
    match *mode {
        StampMode::Dc => AuxContext::Dc,
        StampMode::DcAt { t } | StampMode::Clamped { t, .. } => AuxContext::DcAt(t),
        StampMode::Ac { omega } => AuxContext::Ac(omega),
        StampMode::Tran { t, caps, .. } => AuxContext::Tran { t, caps: caps.to_vec() },
    }
}

/// Assemble the MNA system of a macro-expanded circuit for one mode.
pub fn build_system<T: Scalar>(circuit: &Circuit, mode: &StampMode<'_>) -> MnaSystem<T> {
    let clamp = matches!(mode, StampMode::Clamped { .. });
    let layout = Arc::new(UnknownLayout::new(circuit, clamp));
    let index = Arc::new(ProbeIndex::new(circuit, &UnknownLayout::new(circuit, false)));
    assemble(circuit, layout, index, mode)
}

pub(crate) fn assemble<T: Scalar>(
    circuit: &Circuit,
    layout: Arc<UnknownLayout>,
    index: Arc<ProbeIndex>,
    mode: &StampMode<'_>,
) -> MnaSystem<T> {
    debug_assert!(circuit.is_expanded(), "macro conveyors must be expanded first");
    let n = layout.len();
    let mut matrix = vec![T::ZERO; n * n];
    let mut rhs = vec![T::ZERO; n];
    let mut sink = Sink {
        n,
        matrix: Some(&mut matrix),
        rhs: &mut rhs,
    };
    for (i, e) in circuit.elements.iter().enumerate() {
        stamp(e, layout.slots(i), mode, &mut sink);
    }
    MnaSystem {
        n,
        matrix,
        rhs,
        index,
        aux: aux_for(mode),
        layout,
    }
}

/// Right-hand side only, for reuse of an existing factorisation.
pub(crate) fn assemble_rhs<T: Scalar>(circuit: &Circuit, layout: &UnknownLayout, mode: &StampMode<'_>) -> Vec<T> {
    let n = layout.len();
    let mut rhs = vec![T::ZERO; n];
    let mut sink = Sink {
        n,
        matrix: None,
        rhs: &mut rhs,
    };
    for (i, e) in circuit.elements.iter().enumerate() {
        stamp(e, layout.slots(i), mode, &mut sink);
    }
    rhs
}

impl<T: Scalar> MnaSystem<T> {
    pub fn layout(&self) -> &UnknownLayout {
        &self.layout
    }

    /// Human-readable name of each unknown, e.g. `V(out)` or `I(V1)`.
    pub fn labels(&self) -> Vec<String> {
        self.layout.unknowns().iter().map(|u| self.index.label(*u)).collect()
    }

    pub fn factor(&self) -> Result<LuFactors<T>, SolveError> {
        LuFactors::factor(self.matrix.clone(), self.n)
            .map_err(|p| self.index.singular(self.layout.unknowns()[p.column]))
    }

    /// Wrap a solved unknown vector. Extra clamping branches are dropped.
    pub fn solution(&self, mut values: Vec<T>) -> Solution<T> {
        values.truncate(self.index.unknown_count());
        Solution::new(values, self.index.clone(), &self.aux)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{elaborate, parse_deck};
    use num_complex::Complex64;

    fn circuit(text: &str) -> Circuit {
        elaborate(&parse_deck(text).unwrap()).unwrap()
    }

    #[test]
    fn resistor_and_source_is_two_by_two() {
        let c = circuit("t\nV1 1 0 DC 1\nR1 1 0 1k\n.op");
        let sys = build_system::<f64>(&c, &StampMode::Dc);
        assert_eq!(sys.n, 2);
        assert_eq!(sys.labels(), ["V(1)", "I(V1)"]);
    }

    #[test]
    fn amplifier_unknowns_are_nodes_plus_branches() {
        let c = circuit("amp\nVIN in 0 DC 1 AC 1 SIN(0 0.1 1k)\nR1 x 0 1k\nR2 out 0 10k\nCCII+ U1 in x out\n.OP");
        let sys = build_system::<f64>(&c, &StampMode::Dc);
        // 4 nodes with ground, 2 branches
        assert_eq!(c.nodes.len(), 4);
        assert_eq!(sys.n, 5);
        assert_eq!(sys.labels(), ["V(in)", "V(x)", "V(out)", "I(VIN)", "I(U1)"]);
    }

    #[test]
    fn ac_entries() {
        let c = circuit("t\nV1 1 0 AC 1\nR1 1 2 1k\nC1 2 0 1u\n.ac dec 1 1 10");
        let sys = build_system::<Complex64>(&c, &StampMode::Ac { omega: 1e3 });
        // row/col of node 2 = index 1
        let n = sys.n;
        assert_eq!(sys.matrix[0], Complex64::new(1e-3, 0.0));
        assert_eq!(sys.matrix[n + 1], Complex64::new(1e-3, 1e-3));
        assert_eq!(sys.rhs[2], Complex64::ONE);
    }

    #[test]
    fn clamped_layout_extends_regular_one() {
        let c = circuit("t\nV1 1 0 DC 1\nR1 1 2 1k\nC1 2 0 1u IC=0\n.tran 1u 1m");
        let plain = UnknownLayout::new(&c, false);
        let clamped = UnknownLayout::new(&c, true);
        assert_eq!(clamped.unknowns()[..plain.len()], plain.unknowns()[..]);
        assert_eq!(clamped.len(), plain.len() + 1);
    }
}
