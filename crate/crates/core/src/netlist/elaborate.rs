use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::circuit::{Circuit, NodeTable};
use super::deck::*;
use crate::elements::{cccii_input_resistance, Conveyor, Element, ElementKind, Generation, NonIdealParams, SourceWave};
use crate::{DEFAULT_MACRO_GAIN, DEFAULT_VT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElaborateErrorKind {
    #[error("duplicate element name '{0}'")]
    DuplicateElementName(String),
    #[error("{element}: {param} must be positive (got {value})")]
    NonPositiveValue {
        element: String,
        param: &'static str,
        value: f64,
    },
    #[error("{element}: {message}")]
    InvalidParameter { element: String, message: String },
    #[error("no element is connected to ground node 0")]
    NoGroundReference,
    #[error("circuit has no elements")]
    EmptyCircuit,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ElaborateError {
    pub line: usize,
    pub kind: ElaborateErrorKind,
}

impl fmt::Display for ElaborateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.kind)
    }
}

/// Build a validated [`Circuit`] from a parsed deck.
///
/// Nodes are interned in first-appearance order after ground; defaults are
/// applied to omitted conveyor parameters.
pub fn elaborate(deck: &Deck) -> Result<Circuit, ElaborateError> {
    if deck.cards.is_empty() {
        return Err(ElaborateError {
            line: 1,
            kind: ElaborateErrorKind::EmptyCircuit,
        });
    }

    let mut nodes = NodeTable::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut elements = Vec::with_capacity(deck.cards.len());
    for card in &deck.cards {
        let err = |kind| ElaborateError { line: card.line, kind };
        if seen.insert(card.name.to_ascii_lowercase(), card.line).is_some() {
            return Err(err(ElaborateErrorKind::DuplicateElementName(card.name.clone())));
        }
        let ids: Vec<_> = card.nodes.iter().map(|n| nodes.intern(n)).collect();
        let kind = element_kind(card, &ids).map_err(err)?;
        elements.push(Element {
            name: card.name.clone(),
            line: card.line,
            kind,
        });
    }

    if !elements.iter().any(|e| e.kind.nodes().iter().any(|n| n.is_ground())) {
        return Err(ElaborateError {
            line: deck.cards[0].line,
            kind: ElaborateErrorKind::NoGroundReference,
        });
    }

    Ok(Circuit {
        title: deck.title.clone(),
        nodes,
        elements,
        macros: Vec::new(),
    })
}

fn number(card: &ElementCard, key: ParamKey) -> Option<f64> {
    card.params.get(&key).and_then(ParamValue::number)
}

fn positive(card: &ElementCard, param: &'static str, value: f64) -> Result<f64, ElaborateErrorKind> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ElaborateErrorKind::NonPositiveValue {
            element: card.name.clone(),
            param,
            value,
        })
    }
}

fn invalid(card: &ElementCard, message: impl Into<String>) -> ElaborateErrorKind {
    ElaborateErrorKind::InvalidParameter {
        element: card.name.clone(),
        message: message.into(),
    }
}

fn source_wave(card: &ElementCard) -> SourceWave {
    SourceWave {
        dc: number(card, ParamKey::Dc).unwrap_or(0.0),
        ac: match card.params.get(&ParamKey::Ac) {
            Some(&ParamValue::Phasor { mag, phase_deg }) => Some((mag, phase_deg.unwrap_or(0.0))),
            _ => None,
        },
        sin: match card.params.get(&ParamKey::Sin) {
            Some(&ParamValue::Sin(s)) => Some(s),
            _ => None,
        },
    }
}

fn element_kind(card: &ElementCard, ids: &[crate::netlist::NodeId]) -> Result<ElementKind, ElaborateErrorKind> {
    let value = || number(card, ParamKey::Value).unwrap_or(0.0);
    Ok(match card.kind {
        CardKind::Resistor => ElementKind::Resistor {
            a: ids[0],
            b: ids[1],
            r: positive(card, "R", value())?,
        },
        CardKind::Capacitor => ElementKind::Capacitor {
            a: ids[0],
            b: ids[1],
            c: positive(card, "C", value())?,
            ic: number(card, ParamKey::Ic),
        },
        CardKind::VSource => ElementKind::VSource {
            pos: ids[0],
            neg: ids[1],
            wave: source_wave(card),
        },
        CardKind::ISource => ElementKind::ISource {
            pos: ids[0],
            neg: ids[1],
            wave: source_wave(card),
        },
        CardKind::Cci | CardKind::Ccii(_) | CardKind::Cccii(_) => ElementKind::Conveyor(conveyor(card, ids)?),
    })
}

fn conveyor(card: &ElementCard, ids: &[crate::netlist::NodeId]) -> Result<Conveyor, ElaborateErrorKind> {
    let (generation, polarity) = match card.kind {
        CardKind::Cci => (Generation::Cci, Polarity::Positive),
        CardKind::Ccii(p) => (Generation::Ccii, p),
        CardKind::Cccii(p) => {
            let ib = number(card, ParamKey::Ib).ok_or_else(|| invalid(card, "IB= is required"))?;
            let ib = positive(card, "IB", ib)?;
            let vt = positive(card, "VT", number(card, ParamKey::Vt).unwrap_or(DEFAULT_VT))?;
            debug_assert!(cccii_input_resistance(ib, vt).is_ok());
            (Generation::Cccii { ib, vt }, p)
        }
        _ => unreachable!(),
    };

    let resistance = |key: ParamKey| -> Option<f64> {
        match card.params.get(&key) {
            Some(ParamValue::Number(v)) => Some(*v),
            _ => None,
        }
    };
    let rx = resistance(ParamKey::Rx).unwrap_or(0.0);
    if !(rx >= 0.0 && rx.is_finite()) {
        return Err(invalid(card, format!("RX must be >= 0 (got {rx})")));
    }
    let ry = resistance(ParamKey::Ry).map(|v| positive(card, "RY", v)).transpose()?;
    let rz = resistance(ParamKey::Rz).map(|v| positive(card, "RZ", v)).transpose()?;
    let alpha = number(card, ParamKey::Alpha).unwrap_or(1.0);
    if !(alpha > 0.0 && alpha <= 1.1) {
        return Err(invalid(card, format!("ALPHA must be in (0, 1.1] (got {alpha})")));
    }

    let level = match card.params.get(&ParamKey::Level) {
        Some(ParamValue::Level(l)) => *l,
        _ => Level::Ideal,
    };
    let macro_gain = number(card, ParamKey::Gain).unwrap_or(DEFAULT_MACRO_GAIN);
    if level == Level::Macro && !(macro_gain > 1.0 && macro_gain.is_finite()) {
        return Err(invalid(card, format!("macro gain A must exceed 1 (got {macro_gain})")));
    }

    Ok(Conveyor {
        generation,
        polarity,
        y: ids[0],
        x: ids[1],
        z: ids[2],
        nonideal: NonIdealParams { rx, ry, rz, alpha },
        level,
        macro_gain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_deck, NodeId};

    fn circuit(text: &str) -> Result<Circuit, ElaborateError> {
        elaborate(&parse_deck(text).expect("deck parses"))
    }

    #[test]
    fn single_resistor() {
        let c = circuit("t\nR1 1 0 10k\n.op").unwrap();
        assert_eq!(c.nodes.len(), 2);
        assert_eq!(c.nodes.get("0"), Some(NodeId::GROUND));
        assert_eq!(c.elements.len(), 1);
        assert_eq!(
            c.elements[0].kind,
            ElementKind::Resistor {
                a: NodeId(1),
                b: NodeId(0),
                r: 1e4
            }
        );
    }

    #[test]
    fn cccii_defaults() {
        let c = circuit("t\nR1 2 0 1k\nCCCII+ U1 2 3 4 IB=100u\n.op").unwrap();
        let ElementKind::Conveyor(conv) = &c.elements[1].kind else {
            panic!("not a conveyor");
        };
        assert_eq!(conv.beta(), 1.0);
        assert_eq!(conv.generation, Generation::Cccii { ib: 1e-4, vt: 0.02585 });
        assert_eq!(conv.nonideal, NonIdealParams::default());
        assert_eq!(conv.level, Level::Ideal);
        assert!((conv.effective_rx() - 129.25).abs() < 1e-9);
    }

    #[test]
    fn duplicate_names_case_insensitive() {
        let err = circuit("t\nr1 1 0 1k\nR1 1 0 2k\n.op").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matches!(err.kind, ElaborateErrorKind::DuplicateElementName(_)));
    }

    #[test]
    fn non_positive_values() {
        for text in [
            "t\nR1 1 0 0\n.op",
            "t\nC1 1 0 -1u\n.op",
            "t\nCCCII+ U1 1 0 2 IB=0\n.op",
            "t\nCCCII- U1 1 0 2 IB=1m VT=-1\n.op",
            "t\nCCII+ U1 1 0 2 RY=0\n.op",
        ] {
            let err = circuit(text).unwrap_err();
            assert!(
                matches!(err.kind, ElaborateErrorKind::NonPositiveValue { .. }),
                "{text}: {err}"
            );
            assert_eq!(err.line, 2);
        }
    }

    #[test]
    fn invalid_conveyor_parameters() {
        for text in [
            "t\nCCII+ U1 1 0 2 ALPHA=0\n.op",
            "t\nCCII+ U1 1 0 2 ALPHA=1.2\n.op",
            "t\nCCII+ U1 1 0 2 RX=-1\n.op",
            "t\nCCII+ U1 1 0 2 LEVEL=MACRO A=1\n.op",
            "t\nCCCII+ U1 1 0 2\n.op",
        ] {
            let err = circuit(text).unwrap_err();
            assert!(
                matches!(err.kind, ElaborateErrorKind::InvalidParameter { .. }),
                "{text}: {err}"
            );
        }
    }

    #[test]
    fn ground_and_emptiness() {
        let err = circuit("t\nR1 1 2 1k\n.op").unwrap_err();
        assert_eq!(err.kind, ElaborateErrorKind::NoGroundReference);
        let err = circuit("title\n.op\n.end").unwrap_err();
        assert_eq!(err.kind, ElaborateErrorKind::EmptyCircuit);
    }

    #[test]
    fn node_order_is_first_appearance_and_case_insensitive() {
        let text = "t\nR1 b a 1\nR2 A 0 1\nR3 c B 1\n.op";
        let c = circuit(text).unwrap();
        let names: Vec<_> = c.nodes.iter().map(|(_, n)| n.to_string()).collect();
        assert_eq!(names, ["0", "b", "a", "c"]);
        assert_eq!(c, circuit(text).unwrap());
    }

    #[test]
    fn source_defaults() {
        let c = circuit("t\nV1 1 0 AC 2\nR1 1 0 1\n.op").unwrap();
        let ElementKind::VSource { wave, .. } = &c.elements[0].kind else {
            panic!()
        };
        assert_eq!(wave.dc, 0.0);
        assert_eq!(wave.ac, Some((2.0, 0.0)));
        assert_eq!(wave.sin, None);
    }
}
