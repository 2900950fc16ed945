//! Controlled-source realisation of a CCII.
//!
//! A differential VCVS of gain `A` drives terminal X through a 0 V sense
//! source, closing a unity follower loop from Y. A unity CCCS copies the
//! sensed current to Z; CCII- adds a second, inverting mirror stage. The
//! follower error is `1 / (1 + A)`.

use super::{Conveyor, Element, ElementKind, Generation, Level, Polarity, SourceWave};
use crate::netlist::{Circuit, MacroPorts, NodeId, NodeTable};

/// Primitives replacing one macro-level conveyor.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroExpansion {
    pub elements: Vec<Element>,
    /// Offset of the X sense source within `elements`.
    pub sense: usize,
}

/// Expand one CCII with `LEVEL=MACRO`. Internal nodes are interned into
/// `nodes` as `<name>#<role>`; CCCS controls refer to element indices
/// starting at `base`.
pub fn expand_macro(name: &str, conv: &Conveyor, nodes: &mut NodeTable, base: usize) -> MacroExpansion {
    assert_eq!(conv.generation, Generation::Ccii, "only CCII has a macro-model");
    let p = conv.nonideal;
    let mut out: Vec<Element> = Vec::new();
    let mut push = |suffix: &str, kind: ElementKind| -> usize {
        out.push(Element {
            name: format!("{name}#{suffix}"),
            line: 0,
            kind,
        });
        base + out.len() - 1
    };

    if let Some(r) = p.ry {
        push(
            "ry",
            ElementKind::Resistor {
                a: conv.y,
                b: NodeId::GROUND,
                r,
            },
        );
    }
    let follow = if p.alpha != 1.0 {
        let scaled = nodes.intern(&format!("{name}#ya"));
        push(
            "alpha",
            ElementKind::Vcvs {
                pos: scaled,
                neg: NodeId::GROUND,
                ctrl_pos: conv.y,
                ctrl_neg: NodeId::GROUND,
                gain: p.alpha,
            },
        );
        scaled
    } else {
        conv.y
    };

    let amp_out = nodes.intern(&format!("{name}#o"));
    push(
        "amp",
        ElementKind::Vcvs {
            pos: amp_out,
            neg: NodeId::GROUND,
            ctrl_pos: follow,
            ctrl_neg: conv.x,
            gain: conv.macro_gain,
        },
    );
    let sensed = if p.rx > 0.0 {
        nodes.intern(&format!("{name}#s"))
    } else {
        conv.x
    };
    // Current through the sense source is -ix.
    let sense = push(
        "sense",
        ElementKind::VSource {
            pos: amp_out,
            neg: sensed,
            wave: SourceWave::default(),
        },
    );
    if p.rx > 0.0 {
        push(
            "rx",
            ElementKind::Resistor {
                a: sensed,
                b: conv.x,
                r: p.rx,
            },
        );
    }

    match conv.polarity {
        Polarity::Positive => {
            push(
                "mirror",
                ElementKind::Cccs {
                    from: NodeId::GROUND,
                    into: conv.z,
                    control: sense,
                    gain: 1.0,
                },
            );
        }
        Polarity::Negative => {
            let mid = nodes.intern(&format!("{name}#m"));
            push(
                "mirror",
                ElementKind::Cccs {
                    from: NodeId::GROUND,
                    into: mid,
                    control: sense,
                    gain: 1.0,
                },
            );
            let mid_sense = push(
                "msense",
                ElementKind::VSource {
                    pos: mid,
                    neg: NodeId::GROUND,
                    wave: SourceWave::default(),
                },
            );
            push(
                "invert",
                ElementKind::Cccs {
                    from: NodeId::GROUND,
                    into: conv.z,
                    control: mid_sense,
                    gain: -1.0,
                },
            );
        }
    }
    if let Some(r) = p.rz {
        push(
            "rz",
            ElementKind::Resistor {
                a: conv.z,
                b: NodeId::GROUND,
                r,
            },
        );
    }

    MacroExpansion {
        elements: out,
        sense: sense - base,
    }
}

/// Replace every macro-level conveyor by its primitives. Circuits with
/// nothing to expand are returned unchanged.
pub fn expand_macros(circuit: &Circuit) -> Circuit {
    let mut nodes = circuit.nodes.clone();
    let mut elements = Vec::with_capacity(circuit.elements.len());
    let mut macros = circuit.macros.clone();
    for elem in &circuit.elements {
        match &elem.kind {
            ElementKind::Conveyor(c) if c.level == Level::Macro => {
                let base = elements.len();
                let exp = expand_macro(&elem.name, c, &mut nodes, base);
                for mut e in exp.elements {
                    e.line = elem.line;
                    elements.push(e);
                }
                macros.push(MacroPorts {
                    name: elem.name.clone(),
                    polarity: c.polarity,
                    y: c.y,
                    sense: base + exp.sense,
                    ry: c.nonideal.ry,
                });
            }
            _ => elements.push(elem.clone()),
        }
    }
    Circuit {
        title: circuit.title.clone(),
        nodes,
        elements,
        macros,
    }
}
