//! Typed element library and the MNA stamp of every element.
//!
//! Conveyor sign convention: every port current is measured flowing INTO
//! its terminal. The branch unknown `ix` is the X current and the Z current
//! is `iz = beta * ix`, so a CCII+ that sources current out of X sources the
//! same current out of Z.

mod bias;
mod macromodel;
mod stamp;

pub use bias::{cccii_input_resistance, ota_gm, BiasError};
pub use macromodel::{expand_macro, expand_macros, MacroExpansion};
pub use stamp::{stamp, stamp_conveyor, stamp_two_terminal, CapState, Slots, StampMode, StampTarget};

use crate::netlist::NodeId;
pub use crate::netlist::{Level, Polarity, SinSpec};

/// Value of an independent source in each analysis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SourceWave {
    pub dc: f64,
    /// Magnitude and phase in degrees.
    pub ac: Option<(f64, f64)>,
    pub sin: Option<SinSpec>,
}

impl SourceWave {
    /// Transient value: the sine when given, else the DC value held constant.
    pub fn at(&self, t: f64) -> f64 {
        match &self.sin {
            Some(s) => s.at(t),
            None => self.dc,
        }
    }

    /// Scale every source quantity by `k`.
    pub fn scaled(&self, k: f64) -> SourceWave {
        SourceWave {
            dc: self.dc * k,
            ac: self.ac.map(|(m, p)| (m * k, p)),
            sin: self.sin.map(|s| SinSpec {
                offset: s.offset * k,
                amplitude: s.amplitude * k,
                freq: s.freq,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generation {
    /// First generation: Iy = Ix.
    Cci,
    /// Second generation: Iy = 0.
    Ccii,
    /// Current-controlled CCII, Rx set by the bias current.
    Cccii { ib: f64, vt: f64 },
}

/// Relaxations of the ideal port behaviour. `None` resistances are infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonIdealParams {
    pub rx: f64,
    pub ry: Option<f64>,
    pub rz: Option<f64>,
    pub alpha: f64,
}

impl Default for NonIdealParams {
    fn default() -> Self {
        NonIdealParams {
            rx: 0.0,
            ry: None,
            rz: None,
            alpha: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conveyor {
    pub generation: Generation,
    pub polarity: Polarity,
    pub y: NodeId,
    pub x: NodeId,
    pub z: NodeId,
    pub nonideal: NonIdealParams,
    pub level: Level,
    pub macro_gain: f64,
}

impl Conveyor {
    pub fn beta(&self) -> f64 {
        self.polarity.beta()
    }

    /// X-port series resistance, including the bias-derived value of a CCCII.
    pub fn effective_rx(&self) -> f64 {
        match self.generation {
            Generation::Cccii { ib, vt } => cccii_input_resistance(ib, vt).expect("bias validated at elaboration"),
            _ => self.nonideal.rx,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind {
    Resistor {
        a: NodeId,
        b: NodeId,
        r: f64,
    },
    Capacitor {
        a: NodeId,
        b: NodeId,
        c: f64,
        ic: Option<f64>,
    },
    VSource {
        pos: NodeId,
        neg: NodeId,
        wave: SourceWave,
    },
    /// Current flows from `pos` through the source to `neg`.
    ISource {
        pos: NodeId,
        neg: NodeId,
        wave: SourceWave,
    },
    Conveyor(Conveyor),
    /// `V(pos) - V(neg) = gain * (V(ctrl_pos) - V(ctrl_neg))`. Macro-model only.
    Vcvs {
        pos: NodeId,
        neg: NodeId,
        ctrl_pos: NodeId,
        ctrl_neg: NodeId,
        gain: f64,
    },
    /// Injects `gain * I(control)` into `into`, drawn from `from`, where
    /// `control` is the index of an element with a branch current.
    /// Macro-model only.
    Cccs {
        from: NodeId,
        into: NodeId,
        control: usize,
        gain: f64,
    },
}

impl ElementKind {
    /// Whether the element contributes a branch-current unknown.
    pub fn has_branch(&self) -> bool {
        matches!(
            self,
            ElementKind::VSource { .. } | ElementKind::Conveyor(_) | ElementKind::Vcvs { .. }
        )
    }

    /// Terminal nodes, in card order.
    pub fn nodes(&self) -> Vec<NodeId> {
        match *self {
            ElementKind::Resistor { a, b, .. } | ElementKind::Capacitor { a, b, .. } => vec![a, b],
            ElementKind::VSource { pos, neg, .. } | ElementKind::ISource { pos, neg, .. } => {
                vec![pos, neg]
            }
            ElementKind::Conveyor(c) => vec![c.y, c.x, c.z],
            ElementKind::Vcvs {
                pos,
                neg,
                ctrl_pos,
                ctrl_neg,
                ..
            } => vec![pos, neg, ctrl_pos, ctrl_neg],
            ElementKind::Cccs { from, into, .. } => vec![from, into],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub name: String,
    /// Deck line the element came from (0 for generated elements).
    pub line: usize,
    pub kind: ElementKind,
}
