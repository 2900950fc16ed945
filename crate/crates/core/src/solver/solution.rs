use std::sync::Arc;

use thiserror::Error;

use super::mna::{AuxContext, Unknown, UnknownLayout};
use super::SolveError;
use crate::elements::{ElementKind, Generation, SourceWave};
use crate::netlist::{Circuit, NodeId, NodeTable, Port, Probe};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("unknown probe {0}")]
    UnknownProbe(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Access {
    /// Current equals the branch unknown at this extended index.
    Branch(usize),
    Resistor {
        a: NodeId,
        b: NodeId,
        g: f64,
    },
    Capacitor {
        a: NodeId,
        b: NodeId,
        c: f64,
        slot: usize,
    },
    ISource {
        pos: NodeId,
        neg: NodeId,
        wave: SourceWave,
    },
    Conveyor {
        branch: usize,
        beta: f64,
        cci: bool,
        y: NodeId,
        x: NodeId,
        z: NodeId,
        ry: Option<f64>,
        rz: Option<f64>,
    },
    Cccs {
        from: NodeId,
        into: NodeId,
        control: usize,
        gain: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    name: String,
    line: usize,
    nodes: Vec<NodeId>,
    access: Access,
}

#[derive(Debug, Clone, PartialEq)]
struct MacroEntry {
    name: String,
    beta: f64,
    y: NodeId,
    sense: usize,
    ry: Option<f64>,
}

/// Maps probe names onto a solved unknown vector. Shared by every
/// solution of one circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeIndex {
    nodes: NodeTable,
    unknowns: usize,
    entries: Vec<Entry>,
    macros: Vec<MacroEntry>,
    /// First deck line touching each node, for diagnostics.
    node_lines: Vec<Option<usize>>,
}

impl ProbeIndex {
    pub fn new(circuit: &Circuit, layout: &UnknownLayout) -> Self {
        let mut node_lines = vec![None; circuit.nodes.len()];
        let entries = circuit
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let slots = layout.slots(i);
                for n in e.kind.nodes() {
                    node_lines[n.0].get_or_insert(e.line);
                }
                let access = match e.kind {
                    ElementKind::VSource { .. } | ElementKind::Vcvs { .. } => {
                        Access::Branch(slots.branch.expect("branch"))
                    }
                    ElementKind::Resistor { a, b, r } => Access::Resistor { a, b, g: 1.0 / r },
                    ElementKind::Capacitor { a, b, c, .. } => Access::Capacitor {
                        a,
                        b,
                        c,
                        slot: slots.cap.expect("cap slot"),
                    },
                    ElementKind::ISource { pos, neg, wave } => Access::ISource { pos, neg, wave },
                    ElementKind::Conveyor(c) => Access::Conveyor {
                        branch: slots.branch.expect("branch"),
                        beta: c.beta(),
                        cci: c.generation == Generation::Cci,
                        y: c.y,
                        x: c.x,
                        z: c.z,
                        ry: c.nonideal.ry,
                        rz: c.nonideal.rz,
                    },
                    ElementKind::Cccs { from, into, gain, .. } => Access::Cccs {
                        from,
                        into,
                        control: slots.control.expect("control branch"),
                        gain,
                    },
                };
                Entry {
                    name: e.name.clone(),
                    line: e.line,
                    nodes: e.kind.nodes(),
                    access,
                }
            })
            .collect();
        let macros = circuit
            .macros
            .iter()
            .map(|m| MacroEntry {
                name: m.name.clone(),
                beta: m.polarity.beta(),
                y: m.y,
                sense: layout.slots(m.sense).branch.expect("sense branch"),
                ry: m.ry,
            })
            .collect();
        ProbeIndex {
            nodes: circuit.nodes.clone(),
            unknowns: layout.len(),
            entries,
            macros,
            node_lines,
        }
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns
    }

    pub fn nodes(&self) -> &NodeTable {
        &self.nodes
    }

    pub fn label(&self, u: Unknown) -> String {
        match u {
            Unknown::Node(n) => format!("V({})", self.nodes.name(n)),
            Unknown::Branch(i) => format!("I({})", self.entries[i].name),
        }
    }

    pub(crate) fn singular(&self, u: Unknown) -> SolveError {
        let (diagnostic, line) = match u {
            Unknown::Node(n) => (
                format!(
                    "node '{}' is floating (no DC path to ground or a defined voltage)",
                    self.nodes.name(n)
                ),
                self.node_lines[n.0],
            ),
            Unknown::Branch(i) => {
                let e = &self.entries[i];
                (
                    format!(
                        "'{}' closes a loop of voltage-defining branches (sources or conveyor X ports) or drives an undetermined node",
                        e.name
                    ),
                    Some(e.line).filter(|&l| l > 0),
                )
            }
        };
        SolveError::SingularMatrix {
            unknown: self.label(u),
            diagnostic,
            line,
        }
    }

    fn entry(&self, name: &str) -> Option<(usize, &Entry)> {
        self.entries
            .iter()
            .enumerate()
            .find(|(_, e)| e.name.eq_ignore_ascii_case(name))
    }
}

fn source_value<T: Scalar>(wave: &SourceWave, aux: &AuxContext) -> T {
    match *aux {
        AuxContext::Dc => T::from_real(wave.dc),
        AuxContext::DcAt(t) | AuxContext::Tran { t, .. } => T::from_real(wave.at(t)),
        AuxContext::Ac(_) => match wave.ac {
            Some((mag, ph)) => {
                let ph = ph.to_radians();
                T::from_parts(mag * ph.cos(), mag * ph.sin())
            }
            None => T::ZERO,
        },
    }
}

/// One solved unknown vector with named accessors.
#[derive(Debug, Clone)]
pub struct Solution<T> {
    values: Vec<T>,
    /// Current of every element without a branch unknown (capacitors and
    /// current sources), by element index; zero elsewhere.
    element_currents: Vec<T>,
    index: Arc<ProbeIndex>,
}

impl<T: Scalar> Solution<T> {
    pub fn new(values: Vec<T>, index: Arc<ProbeIndex>, aux: &AuxContext) -> Self {
        assert_eq!(values.len(), index.unknowns, "solution length mismatch");
        let mut sol = Solution {
            element_currents: vec![T::ZERO; index.entries.len()],
            values,
            index,
        };
        for i in 0..sol.index.entries.len() {
            let current = match &sol.index.entries[i].access {
                Access::ISource { wave, .. } => source_value(wave, aux),
                &Access::Capacitor { a, b, c, slot } => match aux {
                    AuxContext::Dc | AuxContext::DcAt(_) => T::ZERO,
                    AuxContext::Ac(omega) => T::from_parts(0.0, omega * c) * (sol.node(a) - sol.node(b)),
                    AuxContext::Tran { caps, .. } => T::from_real(caps[slot].i),
                },
                _ => continue,
            };
            sol.element_currents[i] = current;
        }
        sol
    }

    /// Raw unknown vector in layout order.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn index(&self) -> &Arc<ProbeIndex> {
        &self.index
    }

    fn node(&self, n: NodeId) -> T {
        if n.is_ground() {
            T::ZERO
        } else {
            self.values[n.0 - 1]
        }
    }

    fn ext(&self, k: usize) -> T {
        self.values[k - 1]
    }

    pub fn voltage(&self, node: &str) -> Result<T, ProbeError> {
        self.index
            .nodes
            .get(node)
            .map(|n| self.node(n))
            .ok_or_else(|| ProbeError::UnknownProbe(format!("V({node})")))
    }

    /// Element current. Sources, resistors and capacitors take no port;
    /// conveyors require one.
    pub fn current(&self, element: &str, port: Option<Port>) -> Result<T, ProbeError> {
        let unknown = || {
            ProbeError::UnknownProbe(
                Probe::Current {
                    element: element.to_string(),
                    port,
                }
                .to_string(),
            )
        };
        if let Some(m) = self.index.macros.iter().find(|m| m.name.eq_ignore_ascii_case(element)) {
            let ix = -self.ext(m.sense);
            return match port.ok_or_else(unknown)? {
                Port::X => Ok(ix),
                Port::Z => Ok(T::from_real(m.beta) * ix),
                Port::Y => Ok(m.ry.map_or(T::ZERO, |r| self.node(m.y) / T::from_real(r))),
            };
        }
        let (i, entry) = self.index.entry(element).ok_or_else(unknown)?;
        match (&entry.access, port) {
            (
                Access::Conveyor {
                    branch,
                    beta,
                    cci,
                    y,
                    ry,
                    ..
                },
                Some(port),
            ) => {
                let ix = self.ext(*branch);
                Ok(match port {
                    Port::X => ix,
                    Port::Z => T::from_real(*beta) * ix,
                    Port::Y if *cci => ix,
                    Port::Y => ry.map_or(T::ZERO, |r| self.node(*y) / T::from_real(r)),
                })
            }
            (Access::Conveyor { .. }, None) | (_, Some(_)) => Err(unknown()),
            (Access::Branch(k), None) => Ok(self.ext(*k)),
            (&Access::Resistor { a, b, g }, None) => Ok((self.node(a) - self.node(b)) * T::from_real(g)),
            (Access::Capacitor { .. } | Access::ISource { .. }, None) => Ok(self.element_currents[i]),
            (&Access::Cccs { control, gain, .. }, None) => Ok(T::from_real(gain) * self.ext(control)),
        }
    }

    pub fn probe(&self, probe: &Probe) -> Result<T, ProbeError> {
        match probe {
            Probe::Voltage(n) => self.voltage(n),
            Probe::Current { element, port } => self.current(element, *port),
        }
    }

    /// Current flowing from each non-ground terminal node into the element
    /// at `element` (index in the expanded circuit).
    pub fn terminal_currents(&self, element: usize) -> Vec<(NodeId, T)> {
        let e = &self.index.entries[element];
        let two = |a: NodeId, b: NodeId, i: T| vec![(a, i), (b, -i)];
        let all = match e.access {
            Access::Branch(k) => {
                let (p, n) = (e.nodes[0], e.nodes[1]);
                two(p, n, self.ext(k))
            }
            Access::Resistor { a, b, g } => two(a, b, (self.node(a) - self.node(b)) * T::from_real(g)),
            Access::Capacitor { a, b, .. } => two(a, b, self.element_currents[element]),
            Access::ISource { pos, neg, .. } => two(pos, neg, self.element_currents[element]),
            Access::Conveyor {
                branch,
                beta,
                cci,
                y,
                x,
                z,
                ry,
                rz,
            } => {
                let ix = self.ext(branch);
                let iy = if cci {
                    ix
                } else {
                    ry.map_or(T::ZERO, |r| self.node(y) / T::from_real(r))
                };
                let iz = T::from_real(beta) * ix + rz.map_or(T::ZERO, |r| self.node(z) / T::from_real(r));
                vec![(y, iy), (x, ix), (z, iz)]
            }
            Access::Cccs {
                from,
                into,
                control,
                gain,
            } => {
                let i = T::from_real(gain) * self.ext(control);
                vec![(into, -i), (from, i)]
            }
        };
        all.into_iter().filter(|(n, _)| !n.is_ground()).collect()
    }
}

/// Named currents of every source and conveyor port: `I(V1)`, `I(U1.X)`.
/// Macro-model internals are omitted.
pub fn branch_currents<T: Scalar>(solution: &Solution<T>) -> Vec<(String, T)> {
    let mut out = Vec::new();
    let ports = |out: &mut Vec<(String, T)>, name: &str| {
        for port in [Port::X, Port::Y, Port::Z] {
            let probe = Probe::Current {
                element: name.to_string(),
                port: Some(port),
            };
            let v = solution.probe(&probe).expect("conveyor port");
            out.push((probe.to_string(), v));
        }
    };
    for e in &solution.index.entries {
        if e.name.contains('#') {
            continue;
        }
        match e.access {
            Access::Branch(_) | Access::ISource { .. } => {
                let v = solution.current(&e.name, None).expect("source current");
                out.push((format!("I({})", e.name), v));
            }
            Access::Conveyor { .. } => ports(&mut out, &e.name),
            _ => {}
        }
    }
    for m in &solution.index.macros {
        ports(&mut out, &m.name);
    }
    out
}
