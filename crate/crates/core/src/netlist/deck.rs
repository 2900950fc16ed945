//! Parsed-but-unelaborated deck representation.

use std::collections::BTreeMap;
use std::fmt;

/// Z-port polarity of a second-generation conveyor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn beta(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }

    fn sign(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CardKind {
    Resistor,
    Capacitor,
    VSource,
    ISource,
    Cci,
    Ccii(Polarity),
    Cccii(Polarity),
}

impl CardKind {
    /// Keyword for conveyor cards, which carry their name as a separate token.
    pub fn conveyor_keyword(keyword: &str) -> Option<CardKind> {
        match keyword.to_ascii_uppercase().as_str() {
            "CCI" => Some(CardKind::Cci),
            "CCII+" => Some(CardKind::Ccii(Polarity::Positive)),
            "CCII-" => Some(CardKind::Ccii(Polarity::Negative)),
            "CCCII+" => Some(CardKind::Cccii(Polarity::Positive)),
            "CCCII-" => Some(CardKind::Cccii(Polarity::Negative)),
            _ => None,
        }
    }

    /// Two-terminal kinds are identified by the first letter of their name.
    pub fn from_name_prefix(name: &str) -> Option<CardKind> {
        match name.chars().next()?.to_ascii_uppercase() {
            'R' => Some(CardKind::Resistor),
            'C' => Some(CardKind::Capacitor),
            'V' => Some(CardKind::VSource),
            'I' => Some(CardKind::ISource),
            _ => None,
        }
    }

    pub fn is_conveyor(self) -> bool {
        matches!(self, CardKind::Cci | CardKind::Ccii(_) | CardKind::Cccii(_))
    }

    pub fn node_count(self) -> usize {
        if self.is_conveyor() {
            3
        } else {
            2
        }
    }

    /// Whether `key` may appear on a card of this kind.
    pub fn allows(self, key: ParamKey) -> bool {
        use ParamKey::*;
        match self {
            CardKind::Resistor => key == Value,
            CardKind::Capacitor => matches!(key, Value | Ic),
            CardKind::VSource | CardKind::ISource => matches!(key, Dc | Ac | Sin),
            CardKind::Cci => false,
            CardKind::Ccii(_) => matches!(key, Rx | Ry | Rz | Alpha | Level | Gain),
            CardKind::Cccii(_) => matches!(key, Ib | Vt),
        }
    }
}

impl fmt::Display for CardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardKind::Resistor => f.write_str("R"),
            CardKind::Capacitor => f.write_str("C"),
            CardKind::VSource => f.write_str("V"),
            CardKind::ISource => f.write_str("I"),
            CardKind::Cci => f.write_str("CCI"),
            CardKind::Ccii(p) => write!(f, "CCII{}", p.sign()),
            CardKind::Cccii(p) => write!(f, "CCCII{}", p.sign()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamKey {
    /// Positional value of R and C cards.
    Value,
    Ic,
    Dc,
    Ac,
    Sin,
    Rx,
    Ry,
    Rz,
    Alpha,
    Level,
    /// Macro-model open-loop gain, `A=`.
    Gain,
    Ib,
    Vt,
}

impl ParamKey {
    pub fn from_keyword(word: &str) -> Option<ParamKey> {
        Some(match word.to_ascii_uppercase().as_str() {
            "IC" => ParamKey::Ic,
            "DC" => ParamKey::Dc,
            "AC" => ParamKey::Ac,
            "SIN" => ParamKey::Sin,
            "RX" => ParamKey::Rx,
            "RY" => ParamKey::Ry,
            "RZ" => ParamKey::Rz,
            "ALPHA" => ParamKey::Alpha,
            "LEVEL" => ParamKey::Level,
            "A" => ParamKey::Gain,
            "IB" => ParamKey::Ib,
            "VT" => ParamKey::Vt,
            _ => return None,
        })
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ParamKey::Value => "",
            ParamKey::Ic => "IC",
            ParamKey::Dc => "DC",
            ParamKey::Ac => "AC",
            ParamKey::Sin => "SIN",
            ParamKey::Rx => "RX",
            ParamKey::Ry => "RY",
            ParamKey::Rz => "RZ",
            ParamKey::Alpha => "ALPHA",
            ParamKey::Level => "LEVEL",
            ParamKey::Gain => "A",
            ParamKey::Ib => "IB",
            ParamKey::Vt => "VT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Ideal,
    Macro,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinSpec {
    pub offset: f64,
    pub amplitude: f64,
    pub freq: f64,
}

impl SinSpec {
    pub fn at(&self, t: f64) -> f64 {
        self.offset + self.amplitude * (2.0 * std::f64::consts::PI * self.freq * t).sin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Number(f64),
    /// `INF`, accepted for RY and RZ.
    Infinite,
    Phasor {
        mag: f64,
        phase_deg: Option<f64>,
    },
    Sin(SinSpec),
    Level(Level),
}

impl ParamValue {
    pub fn number(&self) -> Option<f64> {
        match *self {
            ParamValue::Number(x) => Some(x),
            _ => None,
        }
    }
}

pub type Params = BTreeMap<ParamKey, ParamValue>;

#[derive(Debug, Clone)]
pub struct ElementCard {
    pub kind: CardKind,
    pub name: String,
    pub nodes: Vec<String>,
    pub params: Params,
    /// Source line, kept for diagnostics. Not part of card equality.
    pub line: usize,
}

impl PartialEq for ElementCard {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.name == other.name && self.nodes == other.nodes && self.params == other.params
    }
}

/// Terminal selector of a conveyor current probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    X,
    Y,
    Z,
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Port::X => "X",
            Port::Y => "Y",
            Port::Z => "Z",
        })
    }
}

/// An output quantity named in `.PRINT` or on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Probe {
    Voltage(String),
    Current { element: String, port: Option<Port> },
}

impl Probe {
    /// Parse the compact form used on the command line: `V(out)`, `I(U1.X)`.
    pub fn parse(text: &str) -> Option<Probe> {
        let text = text.trim();
        let open = text.find('(')?;
        let inner = text[open + 1..].strip_suffix(')')?.trim();
        if inner.is_empty() || inner.contains(['(', ')', ' ']) {
            return None;
        }
        match text[..open].trim().to_ascii_uppercase().as_str() {
            "V" => Some(Probe::Voltage(inner.to_string())),
            "I" => Some(Probe::current(inner)),
            _ => None,
        }
    }

    /// Split `U1.X` into element and port. A suffix that is not a port
    /// letter stays part of the element name.
    pub fn current(inner: &str) -> Probe {
        if let Some((elem, port)) = inner.rsplit_once('.') {
            let port = match port.to_ascii_uppercase().as_str() {
                "X" => Some(Port::X),
                "Y" => Some(Port::Y),
                "Z" => Some(Port::Z),
                _ => None,
            };
            if port.is_some() && !elem.is_empty() {
                return Probe::Current {
                    element: elem.to_string(),
                    port,
                };
            }
        }
        Probe::Current {
            element: inner.to_string(),
            port: None,
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probe::Voltage(node) => write!(f, "V({node})"),
            Probe::Current { element, port: None } => write!(f, "I({element})"),
            Probe::Current { element, port: Some(p) } => write!(f, "I({element}.{p})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub pts_per_decade: usize,
    pub fstart: f64,
    pub fstop: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranSpec {
    pub tstep: f64,
    pub tstop: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Analysis {
    Op,
    Ac(SweepSpec),
    Tran(TranSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Op,
    Ac(SweepSpec),
    Tran(TranSpec),
    Print(Vec<Probe>),
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deck {
    pub title: String,
    pub cards: Vec<ElementCard>,
    pub directives: Vec<Directive>,
}

impl Deck {
    /// The deck's single analysis. Parsing guarantees exactly one exists.
    pub fn analysis(&self) -> Analysis {
        self.directives
            .iter()
            .find_map(|d| match *d {
                Directive::Op => Some(Analysis::Op),
                Directive::Ac(s) => Some(Analysis::Ac(s)),
                Directive::Tran(s) => Some(Analysis::Tran(s)),
                _ => None,
            })
            .expect("parsed deck carries an analysis")
    }

    /// All `.PRINT` probes in order of appearance.
    pub fn probes(&self) -> Vec<Probe> {
        self.directives
            .iter()
            .filter_map(|d| match d {
                Directive::Print(p) => Some(p.iter().cloned()),
                _ => None,
            })
            .flatten()
            .collect()
    }
}
